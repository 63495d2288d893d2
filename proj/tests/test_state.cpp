#include <hyperfuse/state.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hyperfuse;

namespace {

BasisKet spectator_ket(Party party, int count, std::uint64_t pol_v,
                       std::uint64_t spat) {
  BasisKet ket;
  ket.bank(party) = SpectatorBank{count, pol_v, spat};
  return ket;
}

TEST(HyperW, SmallestInputHasFourUniformTerms) {
  const State s = make_hyper_w(2, Party::alice);
  ASSERT_EQ(s.size(), 4u);
  for (const auto& [ket, amp] : s.terms()) {
    EXPECT_NEAR(amp.real(), 0.5, 1e-15);
    EXPECT_NEAR(amp.imag(), 0.0, 1e-15);
    EXPECT_EQ(ket.total_photons(), 1);
    EXPECT_EQ(ket.bank(Party::alice).count, 1);
    EXPECT_EQ(ket.bank(Party::bob).count, 0);
  }
  // The four branches: fusion photon (pol, rail) against spectator flags.
  auto term = [&](const std::string& text) {
    return s.amplitude(ket_from_string(text)).real();
  };
  EXPECT_NEAR(term("A=H/0 @a1V:1 k=0,0,0"), 0.5, 1e-15);
  EXPECT_NEAR(term("A=H/1 @a0V:1 k=0,0,0"), 0.5, 1e-15);
  EXPECT_NEAR(term("A=V/0 @a1H:1 k=0,0,0"), 0.5, 1e-15);
  EXPECT_NEAR(term("A=V/1 @a0H:1 k=0,0,0"), 0.5, 1e-15);
}

TEST(HyperW, TermCountAndAmplitudeScaleWithN) {
  for (int n = 2; n <= 6; ++n) {
    const State s = make_hyper_w(n, Party::bob);
    EXPECT_EQ(s.size(), static_cast<std::size_t>(n) * n);
    EXPECT_NEAR(norm(s), 1.0, 1e-12);
    for (const auto& [ket, amp] : s.terms())
      EXPECT_NEAR(std::abs(amp), 1.0 / n, 1e-15);
  }
}

TEST(HyperW, GroundFusionBranchCarriesWeightOneOfN) {
  // The all-spectators-ground branch (fusion photon V on rail 1) holds 1/n of
  // the polarization weight; the remaining (n-1)/n sits in the spectator-W
  // branch.  Same split for the spatial layer.
  for (int n = 2; n <= 6; ++n) {
    const State s = make_hyper_w(n, Party::alice);
    double v_weight = 0.0;
    double rail1_weight = 0.0;
    for (const auto& [ket, amp] : s.terms()) {
      if (ket.bank(Party::alice).pol_v == 0) v_weight += std::norm(amp);
      if (ket.bank(Party::alice).spat == 0) rail1_weight += std::norm(amp);
    }
    EXPECT_NEAR(v_weight, 1.0 / n, 1e-12);
    EXPECT_NEAR(rail1_weight, 1.0 / n, 1e-12);
  }
}

TEST(HyperW, SpecificTermOfThreePhotonInput) {
  const State s = make_hyper_w(3, Party::alice);
  ASSERT_EQ(s.size(), 9u);
  const BasisKet all_ground = ket_from_string("A=HH/00 @a1V:1 k=0,0,0");
  EXPECT_NEAR(s.amplitude(all_ground).real(), 1.0 / 3.0, 1e-15);
  const BasisKet second_spec_v = ket_from_string("A=HV/00 @a1H:1 k=0,0,0");
  EXPECT_NEAR(s.amplitude(second_spec_v).real(), 1.0 / 3.0, 1e-15);
}

TEST(HyperW, RejectsBadPhotonNumbers) {
  EXPECT_THROW(make_hyper_w(1, Party::alice), std::invalid_argument);
  EXPECT_THROW(make_hyper_w(0, Party::alice), std::invalid_argument);
  EXPECT_THROW(make_hyper_w(-3, Party::alice), std::invalid_argument);
  EXPECT_THROW(make_hyper_w(65, Party::alice), std::invalid_argument);
}

TEST(Tensor, TwoPartyProductIsUniform) {
  const State s =
      tensor(make_hyper_w(2, Party::alice), make_hyper_w(2, Party::bob));
  ASSERT_EQ(s.size(), 16u);
  EXPECT_NEAR(norm(s), 1.0, 1e-12);
  for (const auto& [ket, amp] : s.terms()) {
    EXPECT_NEAR(std::abs(amp), 0.25, 1e-15);
    EXPECT_EQ(ket.total_photons(), 2);
  }
}

TEST(Tensor, ThreePartyProductIsNormalized) {
  const State s = tensor(
      tensor(make_hyper_w(2, Party::alice), make_hyper_w(3, Party::bob)),
      make_hyper_w(2, Party::charlie));
  EXPECT_EQ(s.size(), 4u * 9u * 4u);
  EXPECT_NEAR(norm(s), 1.0, 1e-12);
}

TEST(Tensor, RejectsPartyRegisterCollision) {
  const State a = make_hyper_w(2, Party::alice);
  EXPECT_THROW(tensor(a, a), std::invalid_argument);
}

TEST(Tensor, RejectsModeCollision) {
  State a;
  State b;
  BasisKet ka;
  ka.occ.emplace_back(make_mode(Port::a0, Pol::h), 1);
  a.add(ka, Amp{1.0, 0.0});
  BasisKet kb;
  kb.occ.emplace_back(make_mode(Port::a0, Pol::h), 1);
  b.add(kb, Amp{1.0, 0.0});
  EXPECT_THROW(tensor(a, b), std::invalid_argument);
}

TEST(Tensor, ProbeIndicesAdd) {
  State a;
  BasisKet ka;
  ka.probe = {2, 0, -1};
  a.add(ka, Amp{1.0, 0.0});
  State b;
  BasisKet kb;
  kb.probe = {1, 3, 0};
  kb.occ.emplace_back(make_mode(Port::b1, Pol::v), 1);
  b.add(kb, Amp{1.0, 0.0});
  const State s = tensor(a, b);
  ASSERT_EQ(s.size(), 1u);
  const BasisKet& ket = s.terms().begin()->first;
  EXPECT_EQ(ket.probe[0], 3);
  EXPECT_EQ(ket.probe[1], 3);
  EXPECT_EQ(ket.probe[2], -1);
}

TEST(InnerProduct, MatchesNormAndConjugateSymmetry) {
  State a;
  a.add(spectator_ket(Party::alice, 2, 1, 0), Amp{0.6, 0.0});
  a.add(spectator_ket(Party::alice, 2, 2, 0), Amp{0.0, 0.8});
  State b;
  b.add(spectator_ket(Party::alice, 2, 1, 0), Amp{0.0, 1.0});
  b.add(spectator_ket(Party::alice, 2, 0, 1), Amp{1.0, 0.0});

  const Amp ab = inner_product(a, b);
  const Amp ba = inner_product(b, a);
  EXPECT_NEAR(ab.real(), std::conj(ba).real(), 1e-15);
  EXPECT_NEAR(ab.imag(), std::conj(ba).imag(), 1e-15);
  EXPECT_NEAR(inner_product(a, a).real(), 1.0, 1e-15);
  EXPECT_NEAR(norm(a), 1.0, 1e-15);
  // <a|b> = conj(0.6)*i = 0.6i
  EXPECT_NEAR(ab.real(), 0.0, 1e-15);
  EXPECT_NEAR(ab.imag(), 0.6, 1e-15);
}

TEST(Fidelity, GlobalPhaseAndScaleInvariant) {
  const State s = make_hyper_w(3, Party::alice);
  State t = s;
  t.scale(Amp{std::cos(0.7), std::sin(0.7)} * 3.5);
  EXPECT_NEAR(fidelity(s, t), 1.0, 1e-12);
  EXPECT_THROW(fidelity(s, State{}), std::invalid_argument);
}

TEST(SpectatorZ, FlipsExcitedRegistersOnly) {
  State s;
  s.add(spectator_ket(Party::alice, 3, 0, 0), Amp{0.5, 0.0});
  s.add(spectator_ket(Party::alice, 3, 2, 0), Amp{0.5, 0.0});
  s.add(spectator_ket(Party::alice, 3, 0, 4), Amp{0.5, 0.0});
  s.add(spectator_ket(Party::alice, 3, 1, 1), Amp{0.5, 0.0});

  const State zp = apply_spectator_z(s, Party::alice, Dof::pol);
  EXPECT_NEAR(zp.amplitude(spectator_ket(Party::alice, 3, 0, 0)).real(), 0.5,
              1e-15);
  EXPECT_NEAR(zp.amplitude(spectator_ket(Party::alice, 3, 2, 0)).real(), -0.5,
              1e-15);
  EXPECT_NEAR(zp.amplitude(spectator_ket(Party::alice, 3, 0, 4)).real(), 0.5,
              1e-15);
  EXPECT_NEAR(zp.amplitude(spectator_ket(Party::alice, 3, 1, 1)).real(), -0.5,
              1e-15);

  const State zs = apply_spectator_z(s, Party::alice, Dof::spat);
  EXPECT_NEAR(zs.amplitude(spectator_ket(Party::alice, 3, 0, 4)).real(), -0.5,
              1e-15);
  EXPECT_NEAR(zs.amplitude(spectator_ket(Party::alice, 3, 2, 0)).real(), 0.5,
              1e-15);

  // Acting on an uninvolved party is the identity.
  const State zb = apply_spectator_z(s, Party::bob, Dof::pol);
  EXPECT_NEAR(fidelity(zb, s), 1.0, 1e-15);
}

TEST(SpectatorZ, IsAnInvolution) {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  State s;
  for (int i = 0; i < 20; ++i) {
    BasisKet ket;
    ket.bank(Party::alice) = SpectatorBank{4, rng() & 0xF, rng() & 0xF};
    ket.bank(Party::bob) = SpectatorBank{3, rng() & 0x7, rng() & 0x7};
    s.add(ket, Amp{coeff(rng), coeff(rng)});
  }
  for (Party party : {Party::alice, Party::bob}) {
    for (Dof dof : {Dof::pol, Dof::spat}) {
      const State twice =
          apply_spectator_z(apply_spectator_z(s, party, dof), party, dof);
      for (const auto& [ket, amp] : s.terms()) {
        const Amp back = twice.amplitude(ket);
        EXPECT_NEAR(std::abs(back - amp), 0.0, 1e-15);
      }
    }
  }
}

TEST(Serialization, KetStringsAreCanonicalAndParseable) {
  BasisKet ket;
  ket.bank(Party::alice) = SpectatorBank{2, 0b01, 0b10};
  ket.bank(Party::charlie) = SpectatorBank{1, 1, 0};
  ket.occ.emplace_back(make_mode(Port::uB, Pol::v), 2);
  ket.occ.emplace_back(make_mode(Port::a0, Pol::h), 1);
  std::sort(ket.occ.begin(), ket.occ.end());
  ket.probe = {3, -2, 0};

  const std::string text = ket_to_string(ket);
  EXPECT_EQ(text, "A=VH/01 C=V/0 @a0H:1 @uBV:2 k=3,-2,0");
  EXPECT_EQ(ket_from_string(text), ket);
}

TEST(Serialization, JsonRoundTripIsExact) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  State s;
  for (int i = 0; i < 40; ++i) {
    BasisKet ket;
    ket.bank(Party::alice) = SpectatorBank{5, rng() & 0x1F, rng() & 0x1F};
    ket.bank(Party::bob) = SpectatorBank{2, rng() & 0x3, rng() & 0x3};
    ket.occ.emplace_back(make_mode(static_cast<Port>(rng() % 10),
                                   (rng() & 1) ? Pol::v : Pol::h),
                         1 + static_cast<int>(rng() % 2));
    ket.probe = {static_cast<int>(rng() % 9) - 4, static_cast<int>(rng() % 7),
                 0};
    s.add(ket, Amp{coeff(rng), coeff(rng)});
  }
  const nlohmann::json j = state_to_json(s);
  const State back = state_from_json(j);
  ASSERT_EQ(back.size(), s.size());
  for (const auto& [ket, amp] : s.terms()) {
    const Amp b = back.amplitude(ket);
    EXPECT_EQ(b.real(), amp.real());
    EXPECT_EQ(b.imag(), amp.imag());
  }
}

TEST(Serialization, JsonTermsAreSortedByKet) {
  State s;
  s.add(spectator_ket(Party::bob, 1, 1, 0), Amp{0.5, 0.0});
  s.add(spectator_ket(Party::alice, 1, 0, 1), Amp{0.5, 0.0});
  const nlohmann::json j = state_to_json(s);
  const auto& terms = j.at("terms");
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_LT(terms[0].at("ket").get<std::string>(),
            terms[1].at("ket").get<std::string>());
}

TEST(StateAlgebra, PruneDropsNegligibleAmplitudes) {
  State s;
  s.add(spectator_ket(Party::alice, 1, 0, 0), Amp{1.0, 0.0});
  s.add(spectator_ket(Party::alice, 1, 1, 0), Amp{1e-15, 0.0});
  s.prune();
  EXPECT_EQ(s.size(), 1u);
}

TEST(StateAlgebra, WithOccupationKeepsListSorted) {
  BasisKet ket;
  ket = ket.with_occupation(make_mode(Port::s, Pol::v), 2);
  ket = ket.with_occupation(make_mode(Port::a0, Pol::h), 1);
  ASSERT_EQ(ket.occ.size(), 2u);
  EXPECT_TRUE(std::is_sorted(ket.occ.begin(), ket.occ.end()));
  ket = ket.with_occupation(make_mode(Port::s, Pol::v), 0);
  EXPECT_EQ(ket.occ.size(), 1u);
  EXPECT_EQ(ket.photons_in(make_mode(Port::a0, Pol::h)), 1);
}

}  // namespace
