#include <doctest.h>

#include <set>

#include "latquench/errors.hpp"
#include "latquench/fock_basis.hpp"

using namespace lq;

TEST_CASE("basis sizes") {
  CHECK(FockBasis::count(4, 9) == 495);
  CHECK(FockBasis::count(5, 15) == 11628);
  CHECK(FockBasis::count(6, 9) == 3003);
  CHECK(FockBasis::count(1, 7) == 7);
  CHECK(FockBasis(4, OrbitalLayout{3, 3}).size() == 495);
}

TEST_CASE("ascending lexicographic order and ranking round trip") {
  const FockBasis basis(4, OrbitalLayout{3, 2});
  CHECK(basis.state(0).occupations == std::vector<int>{0, 0, 0, 0, 0, 4});
  CHECK(basis.state(basis.size() - 1).occupations == std::vector<int>{4, 0, 0, 0, 0, 0});
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK(basis.rank(basis.occupations(i)) == i);
    CHECK(basis.index(basis.state(i)) == i);
    CHECK(basis.state(i).total() == 4);
    if (i > 0) CHECK(basis.state(i - 1) < basis.state(i));
  }
  CHECK_FALSE(basis.find(NumberState{{1, 1, 1, 1, 1, 0}}).has_value());
  CHECK_THROWS_AS(basis.index(NumberState{{5, 0, 0, 0, 0, 0}}), std::out_of_range);
}

TEST_CASE("basis cap raises a resource error") {
  CHECK_THROWS_AS(FockBasis(4, OrbitalLayout{3, 3}, 100), ResourceCapError);
  CHECK_NOTHROW(FockBasis(4, OrbitalLayout{3, 3}, 495));
}

TEST_CASE("reflection of number states") {
  const OrbitalLayout layout{3, 2};
  const Reflection r = reflect_state(NumberState{{1, 3, 0, 0, 0, 0}}, layout);
  CHECK(r.state.occupations == std::vector<int>{0, 3, 1, 0, 0, 0});
  CHECK(r.sign == 1);
  const Reflection odd = reflect_state(NumberState{{1, 2, 0, 1, 0, 0}}, layout);
  CHECK(odd.state.occupations == std::vector<int>{0, 2, 1, 0, 0, 1});
  CHECK(odd.sign == -1);
  const Reflection two = reflect_state(NumberState{{0, 2, 0, 1, 0, 1}}, layout);
  CHECK(two.sign == 1);
}

TEST_CASE("parity partners: N=4 in nine orbitals") {
  const FockBasis basis(4, OrbitalLayout{3, 3});
  const ParityInfo p = build_parity(basis);
  std::size_t self = 0, self_even = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK(p.partner[p.partner[i]] == i);
    CHECK(p.sign[p.partner[i]] == p.sign[i]);
    if (p.self_symmetric(i)) {
      ++self;
      self_even += p.sign[i] > 0 ? 1 : 0;
    }
  }
  CHECK(self == 39);
  const std::size_t pairs = (basis.size() - self) / 2;
  CHECK(pairs + self_even == 255);
  CHECK(pairs + (self - self_even) == 240);
}

TEST_CASE("h and i classes of lowest-band states") {
  const OrbitalLayout layout{3, 1};
  CHECK(classify_state(NumberState{{0, 4, 0}}, layout).h_class == 0);
  CHECK(classify_state(NumberState{{1, 2, 1}}, layout).h_class == 2);
  CHECK(classify_state(NumberState{{2, 0, 2}}, layout).h_class == 4);
  CHECK(classify_state(NumberState{{0, 4, 0}}, layout).i_class == IClass::Quadruplet);
  CHECK(classify_state(NumberState{{1, 3, 0}}, layout).i_class == IClass::Triplet);
  CHECK(classify_state(NumberState{{2, 2, 0}}, layout).i_class == IClass::DoublePair);
  CHECK(classify_state(NumberState{{1, 2, 1}}, layout).i_class == IClass::SinglePair);
  CHECK(classify_state(NumberState{{0, 3, 0, 0, 1, 0}}, OrbitalLayout{3, 2}).i_class == IClass::Mixed);
  CHECK(classify_state(NumberState{{0, 3, 0}}, layout).i_class == IClass::Undefined);
}

TEST_CASE("labels format and parse back") {
  const OrbitalLayout layout{3, 2};
  CHECK(format_label(NumberState{{1, 3, 0, 0, 0, 0}}, layout) == "|1,3,0>");
  CHECK(format_label(StateLabel{NumberState{{1, 3, 0, 0, 0, 0}}, Combination::Symmetric}, layout) == "|1,3,0>_S");
  const FockBasis basis(3, layout);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (Combination c : {Combination::None, Combination::Symmetric, Combination::Antisymmetric}) {
      const StateLabel label{basis.state(i), c};
      const std::string text = format_label(label, layout);
      CHECK(parse_label(text, layout) == label);
      if (c == Combination::None) seen.insert(text);
    }
  }
  CHECK(seen.size() == basis.size());
  CHECK_THROWS_AS(parse_label("|1,3>", layout), std::invalid_argument);
  CHECK_THROWS_AS(parse_label("1,3,0", layout), std::invalid_argument);
}
