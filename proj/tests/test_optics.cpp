#include <hyperfuse/optics.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace hyperfuse;

namespace {

State single_photon(Port port, Pol pol) {
  State s;
  BasisKet ket;
  ket.occ.emplace_back(make_mode(port, pol), 1);
  s.add(ket, Amp{1.0, 0.0});
  return s;
}

double real_amp(const State& s, const std::string& ket_text) {
  const Amp a = s.amplitude(ket_from_string(ket_text));
  EXPECT_NEAR(a.imag(), 0.0, 1e-15);
  return a.real();
}

TEST(Pbs, IdealRoutingKeepsVAndCrossesH) {
  // Orientation used by the two-party circuit: inputs (a0, b0), H output of
  // a0 is b0 and vice versa, so V photons stay on their own rail.
  auto routed = [&](Port in, Pol pol) {
    return apply_pbs(single_photon(in, pol), Port::a0, Port::b0, Port::b0,
                     Port::a0);
  };
  EXPECT_NEAR(real_amp(routed(Port::a0, Pol::h), "@b0H:1 k=0,0,0"), 1.0, 1e-15);
  EXPECT_NEAR(real_amp(routed(Port::a0, Pol::v), "@a0V:1 k=0,0,0"), 1.0, 1e-15);
  EXPECT_NEAR(real_amp(routed(Port::b0, Pol::h), "@a0H:1 k=0,0,0"), 1.0, 1e-15);
  EXPECT_NEAR(real_amp(routed(Port::b0, Pol::v), "@b0V:1 k=0,0,0"), 1.0, 1e-15);
  for (Pol pol : {Pol::h, Pol::v}) {
    EXPECT_EQ(routed(Port::a0, pol).size(), 1u);
    EXPECT_EQ(routed(Port::b0, pol).size(), 1u);
  }
}

TEST(Pbs, ImperfectionRotatesBeforeRouting) {
  const PbsParams params{0.3, 0.2};
  const auto [c, s] = pbs_rotation(params);
  EXPECT_NEAR(c * c + s * s, 1.0, 1e-15);

  const State out = apply_pbs(single_photon(Port::a0, Pol::v), Port::a0,
                              Port::b0, Port::b0, Port::a0, params);
  // V at in1: the rotated H component crosses (out1 = b0), the V component
  // stays (out2 = a0).
  EXPECT_NEAR(real_amp(out, "@b0H:1 k=0,0,0"), s, 1e-15);
  EXPECT_NEAR(real_amp(out, "@a0V:1 k=0,0,0"), c, 1e-15);

  const State out_h = apply_pbs(single_photon(Port::b0, Pol::h), Port::a0,
                                Port::b0, Port::b0, Port::a0, params);
  EXPECT_NEAR(real_amp(out_h, "@a0H:1 k=0,0,0"), c, 1e-15);
  EXPECT_NEAR(real_amp(out_h, "@b0V:1 k=0,0,0"), -s, 1e-15);
}

TEST(Pbs, RejectsNegativeLeakRatio) {
  EXPECT_THROW(pbs_rotation(PbsParams{0.0, -0.1}), std::invalid_argument);
}

TEST(Bs, BalancedSplitSignConvention) {
  const State plus = apply_bs(single_photon(Port::a0, Pol::v), Port::a0,
                              Port::b0, Port::p, Port::q);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(real_amp(plus, "@pV:1 k=0,0,0"), inv_sqrt2, 1e-15);
  EXPECT_NEAR(real_amp(plus, "@qV:1 k=0,0,0"), inv_sqrt2, 1e-15);

  const State minus = apply_bs(single_photon(Port::b0, Pol::v), Port::a0,
                               Port::b0, Port::p, Port::q);
  EXPECT_NEAR(real_amp(minus, "@pV:1 k=0,0,0"), inv_sqrt2, 1e-15);
  EXPECT_NEAR(real_amp(minus, "@qV:1 k=0,0,0"), -inv_sqrt2, 1e-15);
}

TEST(Bs, ImbalanceDeformsAmplitudes) {
  const BsParams params{0.1};
  const double denom = std::sqrt(1.1 * 1.1 + 1.0);
  const State out = apply_bs(single_photon(Port::a0, Pol::h), Port::a0,
                             Port::b0, Port::p, Port::q, params);
  EXPECT_NEAR(real_amp(out, "@pH:1 k=0,0,0"), 1.1 / denom, 1e-15);
  EXPECT_NEAR(real_amp(out, "@qH:1 k=0,0,0"), 1.0 / denom, 1e-15);
  EXPECT_NEAR(norm(out), 1.0, 1e-14);
}

TEST(Bs, HongOuMandelBunching) {
  // One V photon on each input of a balanced splitter: the coincidence
  // terms cancel and the photons bunch, |2,0> - |0,2> with 1/sqrt(2) each.
  State in = tensor(single_photon(Port::a0, Pol::v),
                    single_photon(Port::b0, Pol::v));
  const State out = apply_bs(in, Port::a0, Port::b0, Port::p, Port::q);
  ASSERT_EQ(out.size(), 2u);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(real_amp(out, "@pV:2 k=0,0,0"), inv_sqrt2, 1e-14);
  EXPECT_NEAR(real_amp(out, "@qV:2 k=0,0,0"), -inv_sqrt2, 1e-14);
  EXPECT_NEAR(norm(out), 1.0, 1e-14);
}

TEST(Bs, DistinguishablePhotonsDoNotFullyBunch) {
  // Opposite polarizations: all four outcomes survive.
  State in = tensor(single_photon(Port::a0, Pol::h),
                    single_photon(Port::b0, Pol::v));
  const State out = apply_bs(in, Port::a0, Port::b0, Port::p, Port::q);
  EXPECT_EQ(out.size(), 4u);
  EXPECT_NEAR(norm(out), 1.0, 1e-14);
  EXPECT_NEAR(real_amp(out, "@pH:1 @pV:1 k=0,0,0"), 0.5, 1e-15);
  EXPECT_NEAR(real_amp(out, "@pH:1 @qV:1 k=0,0,0"), -0.5, 1e-15);
  EXPECT_NEAR(real_amp(out, "@pV:1 @qH:1 k=0,0,0"), 0.5, 1e-15);
  EXPECT_NEAR(real_amp(out, "@qH:1 @qV:1 k=0,0,0"), -0.5, 1e-15);
}

TEST(Hwp, SingleActionAndInvolution) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const State h = apply_hwp(single_photon(Port::p, Pol::h), Port::p);
  EXPECT_NEAR(real_amp(h, "@pH:1 k=0,0,0"), inv_sqrt2, 1e-15);
  EXPECT_NEAR(real_amp(h, "@pV:1 k=0,0,0"), inv_sqrt2, 1e-15);
  const State v = apply_hwp(single_photon(Port::p, Pol::v), Port::p);
  EXPECT_NEAR(real_amp(v, "@pH:1 k=0,0,0"), inv_sqrt2, 1e-15);
  EXPECT_NEAR(real_amp(v, "@pV:1 k=0,0,0"), -inv_sqrt2, 1e-15);

  std::mt19937 rng(7);
  const State s = testutil::random_sparse_state(
      rng, {Port::p, Port::q, Port::r, Port::s}, 10);
  const State twice = apply_hwp(apply_hwp(s, Port::p), Port::p);
  EXPECT_NEAR(fidelity(twice, s), 1.0, 1e-12);
}

TEST(Elements, PreserveNormAndPhotonNumberOnRandomStates) {
  std::mt19937 rng(42);
  for (int iter = 0; iter < 50; ++iter) {
    const State s = testutil::random_sparse_state(
        rng, {Port::a0, Port::a1, Port::b0, Port::b1}, 6);
    int photons = s.terms().begin()->first.total_photons();
    const bool uniform = testutil::photon_count_is(s, photons);

    const State after_pbs =
        apply_pbs(s, Port::a0, Port::b0, Port::b0, Port::a0, PbsParams{0.05, 0.01});
    EXPECT_NEAR(norm(after_pbs), 1.0, 1e-12);
    if (uniform) EXPECT_TRUE(testutil::photon_count_is(after_pbs, photons));

    const State after_bs =
        apply_bs(s, Port::a0, Port::b0, Port::p, Port::q, BsParams{0.1});
    EXPECT_NEAR(norm(after_bs), 1.0, 1e-12);
    if (uniform) EXPECT_TRUE(testutil::photon_count_is(after_bs, photons));

    const State after_hwp = apply_hwp(s, Port::a1);
    EXPECT_NEAR(norm(after_hwp), 1.0, 1e-12);
  }
}

TEST(Elements, UnitarityDefectAcrossParameterGrid) {
  for (double theta : {0.0, 0.01, 0.05}) {
    for (double r : {0.0, 0.01}) {
      EXPECT_LE(unitarity_defect(PbsParams{theta, r}), 1e-12);
    }
  }
  for (double eps : {0.0, 0.01, 0.1}) {
    EXPECT_LE(unitarity_defect(BsParams{eps}), 1e-12);
  }
}

TEST(Elements, TripleOccupancyKeepsNorm) {
  State s;
  BasisKet ket;
  ket.occ.emplace_back(make_mode(Port::a0, Pol::v), 3);
  s.add(ket, Amp{1.0, 0.0});
  const State out = apply_bs(s, Port::a0, Port::b0, Port::p, Port::q);
  EXPECT_EQ(out.size(), 4u);
  EXPECT_NEAR(norm(out), 1.0, 1e-13);
  // Binomial splitting of (p+q)^3/sqrt(8) with bosonic weights.
  EXPECT_NEAR(real_amp(out, "@pV:3 k=0,0,0"), std::sqrt(1.0 / 8.0), 1e-14);
  EXPECT_NEAR(real_amp(out, "@pV:2 @qV:1 k=0,0,0"), std::sqrt(3.0 / 8.0),
              1e-14);
}

}  // namespace
