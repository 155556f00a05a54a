#include <doctest.h>

#include "qfa/cpmap.hpp"

using namespace qfa;

namespace {

CMat random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  return (g + g.adjoint()) / 2.0;
}

CMat vec_of(const CMat& m) {
  return Eigen::Map<const CMat>(m.data(), m.size(), 1);
}

}  // namespace

TEST_CASE("positivity basics") {
  CHECK(is_positive(CMat::Identity(3, 3)));
  CMat nilpotent(2, 2);
  nilpotent << 0, 1, 0, 0;
  CHECK_FALSE(is_positive(nilpotent));

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    CMat x = random_hermitian(3, rng);
    CHECK(is_positive(x.adjoint() * x));
  }
  CHECK_THROWS_AS(is_positive(CMat::Zero(2, 3)), InputError);
}

TEST_CASE("positivity criterion agrees with trace sampling") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    int dim = 2 + static_cast<int>(trial % 3);
    CMat m = random_hermitian(dim, rng);
    if (trial % 2 == 0) m = m.adjoint() * m;  // half are positive
    bool eig_positive = is_positive(m);

    bool sampled_positive = true;
    for (int s = 0; s < 100; ++s) {
      CVec v(dim);
      for (int i = 0; i < dim; ++i)
        v(i) = std::complex<double>(gauss(rng), gauss(rng));
      CMat a = v * v.adjoint();  // random positive rank-1
      if ((m * a).trace().real() < -1e-10) {
        sampled_positive = false;
        break;
      }
    }
    REQUIRE(eig_positive == sampled_positive);
  }
}

TEST_CASE("channel predicate flags") {
  std::mt19937_64 rng(3);

  CpMap unitary = CpMap::from_kraus({random_unitary(3, rng)});
  ChannelFlags f = channel_predicates(unitary);
  CHECK(f.trace_preserving);
  CHECK(f.sub_tracial);
  CHECK(f.unital);
  CHECK(f.sub_unital);
  CHECK(f.bistochastic);
  CHECK(f.sub_bistochastic);

  CpMap measurement = random_measurement_channel(4, rng);
  CHECK(channel_predicates(measurement).bistochastic);

  CpMap half = CpMap::from_kraus({0.5 * CMat::Identity(2, 2)});
  ChannelFlags h = channel_predicates(half);
  CHECK_FALSE(h.trace_preserving);
  CHECK_FALSE(h.unital);
  CHECK(h.sub_tracial);
  CHECK(h.sub_unital);
  CHECK(h.sub_bistochastic);
}

TEST_CASE("superoperator is the vec representation") {
  std::mt19937_64 rng(5);
  CpMap id = CpMap::identity(3);
  CHECK((superoperator(id) - CMat::Identity(9, 9)).cwiseAbs().maxCoeff() <
        1e-14);

  for (int trial = 0; trial < 5; ++trial) {
    CpMap c = random_sub_bistochastic_channel(3, rng);
    CMat t = superoperator(c);
    CMat m = random_hermitian(3, rng);
    CMat lhs = t * vec_of(m);
    CMat rhs = vec_of(c.apply(m));
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }

  // composition corresponds to the matrix product
  CpMap f = random_bistochastic_channel(2, rng);
  CpMap g = random_bistochastic_channel(2, rng);
  CMat prod = superoperator(f) * superoperator(g);
  CHECK((prod - superoperator(compose(f, g))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sub-bistochastic channels are contractions") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 2 + trial % 3;
    CpMap c = random_sub_bistochastic_channel(dim, rng);
    Eigen::JacobiSVD<CMat> svd(superoperator(c));
    REQUIRE(svd.singularValues()(0) <= 1.0 + 1e-10);
  }
  // a unitary conjugation has all singular values equal to 1
  CpMap u = CpMap::from_kraus({random_unitary(3, rng)});
  Eigen::JacobiSVD<CMat> svd(superoperator(u));
  CHECK(std::abs(svd.singularValues()(0) - 1.0) < 1e-10);
  CHECK(std::abs(svd.singularValues()(svd.singularValues().size() - 1) - 1.0) <
        1e-10);
}

TEST_CASE("omega-limit of a unitary channel is the identity") {
  std::mt19937_64 rng(17);
  CpMap u = CpMap::from_kraus({random_unitary(3, rng)});
  OmegaResult res = omega_limit(u);
  CHECK_FALSE(res.reduced_confidence);
  CHECK(res.peripheral_dim == 9);
  CHECK((res.projector - CMat::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("omega-limit of a measurement channel is itself") {
  std::mt19937_64 rng(19);
  CpMap m = random_measurement_channel(3, rng);
  OmegaResult res = omega_limit(m);
  CHECK((res.projector - superoperator(m)).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("omega-limit agrees with iterated squaring on the swap mix") {
  // Phi(M) = (M + T M T*)/2 with T the 2x2 swap: already idempotent
  CMat t(2, 2);
  t << 0, 1, 1, 0;
  CpMap phi = CpMap::from_kraus(
      {std::sqrt(0.5) * CMat::Identity(2, 2), std::sqrt(0.5) * t});
  CMat s = superoperator(phi);
  OmegaResult res = omega_limit(phi);
  CMat power = s;
  for (int k = 0; k < 16; ++k) power = power * power;
  CHECK((res.projector - power).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((res.projector - s).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("omega-limit outputs are norm-bounded projections") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    int dim = 2 + trial % 3;
    CpMap c = random_sub_bistochastic_channel(dim, rng);
    OmegaResult res = omega_limit(c);
    const CMat& e = res.projector;
    REQUIRE((e * e - e).norm() < 1e-6);
    Eigen::JacobiSVD<CMat> svd(e);
    double top = e.size() ? svd.singularValues()(0) : 0.0;
    REQUIRE(top <= 1.0 + 1e-8);
  }
}

TEST_CASE("scaled density matrices") {
  CHECK(is_scaled_density(CMat::Identity(2, 2) / 2.0));
  CMat pure = CMat::Zero(3, 3);
  pure(1, 1) = 1.0;
  CHECK(is_scaled_density(pure));
  CHECK(is_scaled_density(0.3 * pure));  // scaled by surviving mass
  CHECK_FALSE(is_scaled_density(2.0 * pure));
  CMat skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK_FALSE(is_scaled_density(skew));
}

TEST_CASE("omega-limit handles a defective interior block") {
  // peripheral eigenvalue 1, interior a defective Jordan block at 1/2
  CMat t = CMat::Zero(3, 3);
  t(0, 0) = 1.0;
  t(1, 1) = 0.5;
  t(1, 2) = 1.0;
  t(2, 2) = 0.5;
  OmegaResult res = omega_limit_superop(t);
  CHECK(res.peripheral_dim == 1);
  CMat expect = CMat::Zero(3, 3);
  expect(0, 0) = 1.0;
  CHECK((res.projector - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("strictly sub-tracial channels flow to the zero projector") {
  CpMap half = CpMap::from_kraus({0.5 * CMat::Identity(2, 2)});
  OmegaResult res = omega_limit(half);
  CHECK(res.peripheral_dim == 0);
  CHECK(res.projector.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bist_EJ: permutation invariance and absorption") {
  std::mt19937_64 rng(29);

  // k = 1: the omega-limit is the idempotent itself
  CpMap m1 = random_measurement_channel(3, rng);
  BistEjReport solo = verify_bist_ej({superoperator(m1)}, rng, 4);
  CHECK(solo.max_permutation_dev < 1e-9);
  CHECK(solo.max_absorption_dev < 1e-7);

  // two measurement channels on dim 3
  CpMap m2 = random_measurement_channel(3, rng);
  BistEjReport pair =
      verify_bist_ej({superoperator(m1), superoperator(m2)}, rng, 6);
  CHECK(pair.max_permutation_dev < 1e-6);
  CHECK(pair.max_absorption_dev < 1e-6);

  // commuting coordinate projections: the limit is their product
  CMat p1 = CMat::Zero(2, 2), p2 = CMat::Zero(2, 2);
  p1(0, 0) = 1;
  p2(1, 1) = 1;
  CpMap d1 = CpMap::from_kraus({p1, p2});  // dephasing, idempotent
  CMat e1 = superoperator(d1);
  CpMap u = CpMap::from_kraus({CMat::Identity(2, 2)});
  CMat e2 = superoperator(u);
  BistEjReport comm = verify_bist_ej({e1, e2}, rng, 4);
  CHECK(comm.max_permutation_dev < 1e-10);
  OmegaResult prod = omega_limit_superop(e1 * e2);
  CHECK((prod.projector - e1 * e2).cwiseAbs().maxCoeff() < 1e-8);

  // random idempotents from omega-limits of random channels
  for (int trial = 0; trial < 4; ++trial) {
    int dim = 2 + trial % 3;
    std::vector<CMat> idems;
    for (int k = 0; k < 2 + trial % 2; ++k)
      idems.push_back(
          omega_limit(random_sub_bistochastic_channel(dim, rng)).projector);
    BistEjReport rep = verify_bist_ej(idems, rng, 6);
    REQUIRE(rep.max_permutation_dev < 1e-6);
    REQUIRE(rep.max_absorption_dev < 1e-6);
  }
}
