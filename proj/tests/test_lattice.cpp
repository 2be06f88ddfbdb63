#include <doctest.h>

#include <random>

#include "aptscatter/errors.hpp"
#include "aptscatter/lattice.hpp"

using namespace aptscatter;

namespace {

CenterSpec random_spec(std::mt19937_64& rng, CouplingKind kind) {
  std::uniform_real_distribution<double> kappa(0.0, 4.0);
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  std::uniform_real_distribution<double> j(0.2, 3.0);
  return CenterSpec{kind, kappa(rng), v(rng), j(rng)};
}

}  // namespace

TEST_CASE("build_center matches the printed matrices") {
  SUBCASE("imaginary central coupling") {
    const ComplexMatrix h = build_center({CouplingKind::Imaginary, 3.0, 1.0, 1.0});
    CHECK(h(1, 2) == Complex(0, 3));
    CHECK(h(2, 1) == Complex(0, 3));
    CHECK(h(0, 1) == Complex(0, 1));
    CHECK(h(1, 0) == Complex(0, 1));
    CHECK(h(2, 3) == Complex(0, 1));
    CHECK(h(3, 2) == Complex(0, 1));
    CHECK(h(1, 1) == Complex(1, 0));
    CHECK(h(2, 2) == Complex(-1, 0));
    CHECK(h(0, 0) == Complex(0, 0));
    CHECK(h(3, 3) == Complex(0, 0));
    CHECK(h(0, 3) == Complex(0, 0));
  }
  SUBCASE("real central coupling") {
    const ComplexMatrix h = build_center({CouplingKind::Real, 3.0, 1.0, 1.0});
    CHECK(h(1, 2) == Complex(3, 0));
    CHECK(h(2, 1) == Complex(3, 0));
    CHECK(h(0, 1) == Complex(0, 1));
    CHECK(h(2, 2) == Complex(-1, 0));
  }
  SUBCASE("zero parameters leave only the iJ bonds") {
    const ComplexMatrix h = build_center({CouplingKind::Imaginary, 0.0, 0.0, 1.0});
    int nonzero = 0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (h(r, c) != Complex(0, 0)) {
          ++nonzero;
          CHECK(h(r, c) == Complex(0, 1));
        }
    CHECK(nonzero == 4);
  }
  SUBCASE("invalid specs are rejected") {
    CHECK_THROWS_AS(build_center({CouplingKind::Real, 1.0, 0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(build_center({CouplingKind::Real, -1.0, 0.0, 1.0}), ValidationError);
  }
}

TEST_CASE("center Hamiltonians are transpose invariant") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    for (auto kind : {CouplingKind::Imaginary, CouplingKind::Real}) {
      const ComplexMatrix h = build_center(random_spec(rng, kind));
      CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("layout labels") {
  const LatticeLayout layout = LatticeLayout::symmetric(100);
  CHECK(layout.left_lead == 48);
  CHECK(layout.right_lead == 48);
  CHECK(layout.center_offset() == 48);
  CHECK(layout.lead_label(0) == -48);
  CHECK(layout.lead_label(47) == -1);
  CHECK(layout.lead_label(52) == 1);
  CHECK(layout.lead_label(99) == 48);
  CHECK(layout.site_name(48) == "C1");
  CHECK(layout.site_name(51) == "C4");
  CHECK(layout.site_name(0) == "L-48");
  CHECK(layout.site_name(99) == "R48");
  for (int label : {-48, -25, -1, 1, 25, 48}) CHECK(layout.lead_label(layout.index_of_label(label)) == label);

  CHECK_THROWS_AS(LatticeLayout::symmetric(5), StructuralError);
  CHECK_THROWS_AS(LatticeLayout::symmetric(4), StructuralError);
  CHECK_THROWS_AS(LatticeLayout::from_sites(10, 6), StructuralError);
  CHECK_THROWS_AS(layout.index_of_label(0), StructuralError);
}

TEST_CASE("full lattice bond structure") {
  SUBCASE("N = 100: 99 bonds, three of them inside the center") {
    const CenterSpec spec{CouplingKind::Imaginary, 3.0, 1.0, 1.0};
    const LatticeLayout layout = LatticeLayout::symmetric(100);
    const ComplexMatrix h = build_full_lattice(spec, layout);
    REQUIRE(h.rows() == 100);
    int bonds = 0;
    int lead_bonds = 0;
    for (int i = 0; i + 1 < 100; ++i) {
      if (h(i, i + 1) != Complex(0, 0)) ++bonds;
      if (h(i, i + 1) == Complex(-1, 0)) ++lead_bonds;
    }
    CHECK(bonds == 99);
    CHECK(lead_bonds == 96);
    CHECK(h(48, 49) == Complex(0, 1));
    CHECK(h(49, 50) == Complex(0, 3));
    CHECK(h(50, 51) == Complex(0, 1));
    // Nothing beyond the first off-diagonal.
    for (int r = 0; r < 100; ++r)
      for (int c = 0; c < 100; ++c)
        if (std::abs(r - c) > 1) REQUIRE(h(r, c) == Complex(0, 0));
    CHECK(h.block(48, 48, 4, 4) == build_center(spec));
  }

  SUBCASE("N = 6 equals hand assembly") {
    const CenterSpec spec{CouplingKind::Real, 0.7, -0.3, 1.5};
    ComplexMatrix expected = ComplexMatrix::Zero(6, 6);
    // |-1>_l, |1>_c .. |4>_c, |1>_l
    expected(0, 1) = expected(1, 0) = -1.5;
    expected(1, 2) = expected(2, 1) = Complex(0, 1.5);
    expected(2, 3) = expected(3, 2) = 0.7;
    expected(3, 4) = expected(4, 3) = Complex(0, 1.5);
    expected(4, 5) = expected(5, 4) = -1.5;
    expected(2, 2) = -0.3;
    expected(3, 3) = 0.3;
    CHECK(build_full_lattice(spec, LatticeLayout::symmetric(6)) == expected);
  }

  SUBCASE("kappa = 0 leaves the central bond exactly zero") {
    const ComplexMatrix h = build_full_lattice({CouplingKind::Imaginary, 0.0, 1.0, 1.0}, LatticeLayout::symmetric(20));
    CHECK(h(9, 10) == Complex(0, 0));
    CHECK(h(10, 9) == Complex(0, 0));
  }

  SUBCASE("center block restriction equals build_center") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
      const CenterSpec spec = random_spec(rng, i % 2 ? CouplingKind::Real : CouplingKind::Imaginary);
      const LatticeLayout layout = LatticeLayout::from_sites(30, 5 + i % 7);
      const ComplexMatrix h = build_full_lattice(spec, layout);
      CHECK(h.block(layout.center_offset(), layout.center_offset(), 4, 4) == build_center(spec));
    }
  }

  SUBCASE("bad layout") {
    CHECK_THROWS_AS(build_full_lattice({CouplingKind::Real, 1.0, 0.0, 1.0}, LatticeLayout{0, 3}), StructuralError);
    CHECK_THROWS_AS(build_full_lattice(ComplexMatrix::Zero(3, 3), 1.0, LatticeLayout{3, 3}), StructuralError);
  }
}

TEST_CASE("parity operators") {
  const ComplexMatrix even = parity_operator(ParityKind::Even);
  const ComplexMatrix odd = parity_operator(ParityKind::Odd);
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  CHECK(even * even == id);
  CHECK(odd * odd == -id);
  CHECK(pt_parity(even) == 1);
  CHECK(pt_parity(odd) == -1);
  CHECK(pt_parity(id) == 1);
  CHECK(odd(2, 1) == Complex(-1, 0));
  CHECK(odd(3, 0) == Complex(-1, 0));
  CHECK(odd(0, 3) == Complex(1, 0));

  for (int b = 0; b < 4; ++b) {
    const ComplexVector e = ComplexVector::Unit(4, b);
    CHECK(even * (even * e) == e);
  }

  ComplexMatrix not_involution = ComplexMatrix::Identity(4, 4);
  not_involution(0, 0) = 2.0;
  CHECK_THROWS_AS(pt_parity(not_involution), ClassificationError);
}

TEST_CASE("anti-PT symmetry pairs each center with its parity") {
  std::mt19937_64 rng(2024);
  const ComplexMatrix even = parity_operator(ParityKind::Even);
  const ComplexMatrix odd = parity_operator(ParityKind::Odd);
  for (int i = 0; i < 200; ++i) {
    CenterSpec im = random_spec(rng, CouplingKind::Imaginary);
    CenterSpec re = im;
    re.kind = CouplingKind::Real;
    CHECK(check_anti_pt(build_center(im), even));
    CHECK(check_anti_pt(build_center(re), odd));
    if (im.kappa > 1e-6) {
      CHECK_FALSE(check_anti_pt(build_center(re), even));
      CHECK_FALSE(check_anti_pt(build_center(im), odd));
    }
  }
}

TEST_CASE("anti-PT residual of the real center under even parity is 2 kappa") {
  // P conj(H) P^-1 + H has (2,3) entry kappa + kappa; every other entry cancels.
  const double r = anti_pt_residual(build_center({CouplingKind::Real, 3.0, 1.0, 1.0}), parity_operator(ParityKind::Even));
  CHECK(r == doctest::Approx(6.0));
  CHECK(check_anti_pt(build_center({CouplingKind::Real, 0.0, 1.0, 1.0}), parity_operator(ParityKind::Even)));
}

TEST_CASE("check_anti_pt rejects mismatched shapes") {
  CHECK_THROWS_AS(check_anti_pt(ComplexMatrix::Zero(3, 3), parity_operator(ParityKind::Even)), StructuralError);
  CHECK_THROWS_AS(check_anti_pt(ComplexMatrix::Zero(4, 4), ComplexMatrix::Zero(4, 4)), StructuralError);
}
