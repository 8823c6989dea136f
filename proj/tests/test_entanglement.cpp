#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "wgqed/entanglement.hpp"

using namespace wgqed;
using testing::random_unitary;
using testing::random_vector;

namespace {

const double kSqrt2Over3 = std::sqrt(2.0) / 3.0;

CVector normalized(CVector v) { return v / v.norm(); }

DensityMatrix bell_pair() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return pure_density(v, {1, 2});
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector random_product(std::size_t n) {
  CVector v = normalized(random_vector(2));
  for (std::size_t q = 1; q < n; ++q) v = kron(v, normalized(random_vector(2)));
  return v;
}

std::vector<int> labels_upto(std::size_t n) {
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<int>(i + 1);
  return out;
}

int bit_of(std::size_t index, std::size_t n, std::size_t position) {
  return static_cast<int>((index >> (n - 1 - position)) & 1U);
}

// Partial transpose by explicit index swapping on the chosen qubit.
CMatrix brute_partial_transpose(const CMatrix& rho, std::size_t n, std::size_t position) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t mask = std::size_t{1} << (n - 1 - position);
  CMatrix out(rho.rows(), rho.cols());
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const std::size_t r2 = (r & ~mask) | (c & mask);
      const std::size_t c2 = (c & ~mask) | (r & mask);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rho(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2));
    }
  return out;
}

// Reduced matrix over the kept positions (ascending), contracting the rest.
CMatrix brute_partial_trace(const CMatrix& rho, std::size_t n, const std::vector<std::size_t>& keep) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t kept = keep.size();
  CMatrix out = CMatrix::Zero(Eigen::Index{1} << kept, Eigen::Index{1} << kept);
  auto reduced_index = [&](std::size_t full) {
    std::size_t idx = 0;
    for (std::size_t p : keep) idx = (idx << 1) | static_cast<std::size_t>(bit_of(full, n, p));
    return idx;
  };
  auto traced_agree = [&](std::size_t a, std::size_t b) {
    for (std::size_t p = 0; p < n; ++p)
      if (std::find(keep.begin(), keep.end(), p) == keep.end() && bit_of(a, n, p) != bit_of(b, n, p)) return false;
    return true;
  };
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      if (traced_agree(r, c))
        out(static_cast<Eigen::Index>(reduced_index(r)), static_cast<Eigen::Index>(reduced_index(c))) +=
            rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

double brute_negativity(const CMatrix& rho, std::size_t n, std::size_t position) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(brute_partial_transpose(rho, n, position));
  double sum = 0.0;
  for (double v : eig.eigenvalues())
    if (v < 0.0) sum -= v;
  return sum;
}

// Wootters concurrence through a general eigensolver on rho * rho_tilde.
double brute_concurrence(const CMatrix& rho) {
  Eigen::Matrix2cd sy;
  sy << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  const CMatrix flip = kron(CMatrix(sy), CMatrix(sy));
  const CMatrix tilde = flip * rho.conjugate() * flip;
  Eigen::ComplexEigenSolver<CMatrix> eig(rho * tilde);
  std::vector<double> roots;
  for (const auto& v : eig.eigenvalues()) roots.push_back(std::sqrt(std::max(0.0, v.real())));
  std::sort(roots.rbegin(), roots.rend());
  return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

DensityMatrix random_mixed(std::size_t n, std::size_t rank) {
  const auto dim = Eigen::Index{1} << n;
  CMatrix g(dim, static_cast<Eigen::Index>(rank));
  for (Eigen::Index c = 0; c < g.cols(); ++c) g.col(c) = random_vector(dim);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return {labels_upto(n), 0.5 * (rho + rho.adjoint())};
}

}  // namespace

TEST_CASE("density_from_pure") {
  const auto w = density_from_pure(w_state(3));
  CHECK_FALSE(check_density(w).has_value());
  CHECK(std::abs(w.rho.trace() - 1.0) < 1e-14);
  CHECK(std::abs((w.rho * w.rho).trace() - 1.0) < 1e-14);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(w.rho);
  CHECK(eig.eigenvalues()(7) == doctest::Approx(1.0));
  for (Eigen::Index i = 0; i < 7; ++i) CHECK(std::abs(eig.eigenvalues()(i)) < 1e-14);

  CVector first = CVector::Zero(3);
  first(0) = 1.0;
  const auto e = density_from_pure(make_state(first));
  CMatrix expected = CMatrix::Zero(8, 8);
  expected(4, 4) = 1.0;  // |e g g> = bit pattern 100
  CHECK(e.rho == expected);
  CHECK(e.labels == std::vector<int>{1, 2, 3});
}

TEST_CASE("check_density rejects invalid matrices") {
  auto rho = density_from_pure(w_state(2));
  CHECK_FALSE(check_density(rho).has_value());
  auto scaled = rho;
  scaled.rho *= 1.1;
  CHECK(check_density(scaled).has_value());
  auto skew = rho;
  skew.rho(0, 1) += Complex(0.0, 0.1);
  CHECK(check_density(skew).has_value());
  DensityMatrix negative{{1}, CMatrix::Zero(2, 2)};
  negative.rho(0, 0) = 1.2;
  negative.rho(1, 1) = -0.2;
  CHECK(check_density(negative).has_value());
}

TEST_CASE("partial_trace examples") {
  const auto w = density_from_pure(w_state(3));
  const std::vector<int> keep12{1, 2};
  const auto pair = partial_trace(w, keep12);
  CHECK(pair.labels == keep12);
  CHECK(pair.rho(0, 0).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(pair.rho(1, 1) - 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(pair.rho(2, 2) - 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(pair.rho(1, 2) - 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(pair.rho(2, 1) - 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(pair.rho(3, 3)) < 1e-14);
  CHECK((pair.rho - brute_partial_trace(w.rho, 3, {0, 1})).norm() < 1e-14);

  CVector eg = CVector::Zero(4);
  eg(2) = 1.0;  // |e>|g>
  const std::vector<int> keep1{1};
  const auto first = partial_trace(pure_density(eg, {1, 2}), keep1);
  CHECK(std::abs(first.rho(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(first.rho(0, 0)) < 1e-15);

  const std::vector<int> all{1, 2, 3};
  CHECK((partial_trace(w, all).rho - w.rho).norm() == 0.0);
}

TEST_CASE("partial_trace keeps labels in register order") {
  // Asymmetric fixture: amplitudes (0.8, 0.6 i, 0) on labels 1..3.
  CVector c(3);
  c << 0.8, Complex(0.0, 0.6), 0.0;
  const auto rho = density_from_pure(make_state(c));
  const std::vector<int> keep{3, 1};
  const auto reduced = partial_trace(rho, keep);
  CHECK(reduced.labels == std::vector<int>{1, 3});
  // basis |q1 q3>: |10> has weight 0.64, |00> has 0.36
  CHECK(std::abs(reduced.rho(2, 2) - 0.64) < 1e-14);
  CHECK(std::abs(reduced.rho(0, 0) - 0.36) < 1e-14);
  CHECK(std::abs(reduced.rho(1, 1)) < 1e-14);
  CHECK((reduced.rho - brute_partial_trace(rho.rho, 3, {0, 2})).norm() < 1e-14);

  const std::vector<int> keep2{2};
  const auto second = partial_trace(rho, keep2);
  CHECK(std::abs(second.rho(1, 1) - 0.36) < 1e-14);
}

TEST_CASE("partial_trace errors") {
  const auto w = density_from_pure(w_state(3));
  CHECK_THROWS_AS(partial_trace(w, std::vector<int>{}), EmptyKeepSet);
  CHECK_THROWS_AS(partial_trace(w, std::vector<int>{4}), UnknownLabel);
  CHECK_THROWS_AS(partial_transpose(w, 0), UnknownLabel);
}

TEST_CASE("partial_trace composes") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_mixed(4, 3);
    const std::vector<int> step1{1, 2, 4};
    const std::vector<int> step2{2, 4};
    const auto twice = partial_trace(partial_trace(rho, step1), step2);
    const auto once = partial_trace(rho, step2);
    CHECK(twice.labels == once.labels);
    CHECK((twice.rho - once.rho).norm() < 1e-13);
    CHECK(std::abs(once.rho.trace() - 1.0) < 1e-13);
    CHECK((once.rho - brute_partial_trace(rho.rho, 4, {1, 3})).norm() < 1e-13);
  }
}

TEST_CASE("partial_transpose") {
  const auto bell = bell_pair();
  for (int label : {1, 2}) {
    const CMatrix pt = partial_transpose(bell, label);
    CHECK((pt - brute_partial_transpose(bell.rho, 2, static_cast<std::size_t>(label - 1))).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(pt);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(-0.5));
    for (Eigen::Index i = 1; i < 4; ++i) CHECK(eig.eigenvalues()(i) == doctest::Approx(0.5));
    DensityMatrix back{bell.labels, pt};
    CHECK((partial_transpose(back, label) - bell.rho).norm() == 0.0);
  }

  DensityMatrix diag{{1, 2, 3}, CMatrix::Zero(8, 8)};
  for (Eigen::Index i = 0; i < 8; ++i) diag.rho(i, i) = 0.125;
  CHECK(partial_transpose(diag, 2) == diag.rho);

  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_mixed(3, 2);
    for (int label = 1; label <= 3; ++label) {
      const CMatrix pt = partial_transpose(rho, label);
      CHECK((pt - brute_partial_transpose(rho.rho, 3, static_cast<std::size_t>(label - 1))).norm() == 0.0);
      CHECK((pt - pt.adjoint()).norm() < 1e-14);
      CHECK(std::abs(pt.trace() - 1.0) < 1e-13);
    }
  }
}

TEST_CASE("negativity examples") {
  CHECK(negativity(bell_pair(), 1) == doctest::Approx(0.5).epsilon(1e-14));
  const auto w = density_from_pure(w_state(3));
  for (int label = 1; label <= 3; ++label) {
    CHECK(negativity(w, label) == doctest::Approx(kSqrt2Over3).epsilon(1e-13));
    CHECK(brute_negativity(w.rho, 3, static_cast<std::size_t>(label - 1)) ==
          doctest::Approx(kSqrt2Over3).epsilon(1e-13));
    CHECK(schmidt_negativity(w_state(3), label) == doctest::Approx(kSqrt2Over3).epsilon(1e-13));
  }
  CHECK(tripartite_negativity(w) == doctest::Approx(kSqrt2Over3).epsilon(1e-13));

  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK(schmidt_negativity(bell, 2, 0) == doctest::Approx(0.5).epsilon(1e-14));

  CVector first = CVector::Zero(3);
  first(0) = 1.0;
  CHECK(schmidt_negativity(make_state(first), 1) == 0.0);
  CHECK(tripartite_negativity(density_from_pure(make_state(first))) == 0.0);
}

TEST_CASE("clone state has intermediate tripartite negativity") {
  CVector c(3);
  c << 2.0, 1.0, 1.0;
  const auto rho = density_from_pure(make_state(c));
  double product = 1.0;
  for (std::size_t p = 0; p < 3; ++p) product *= brute_negativity(rho.rho, 3, p);
  const double n123 = tripartite_negativity(rho);
  CHECK(n123 == doctest::Approx(std::cbrt(product)).epsilon(1e-12));
  CHECK(n123 > 0.0);
  CHECK(n123 < kSqrt2Over3 - 1e-3);
  CHECK_THROWS_AS(tripartite_negativity(density_from_pure(w_state(4))), WrongQubitCount);
}

TEST_CASE("Schmidt negativity agrees with partial-transpose negativity") {
  for (std::size_t n : {3U, 4U}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto state = make_state(random_vector(static_cast<Eigen::Index>(n)));
      const auto rho = density_from_pure(state);
      for (int label = 1; label <= static_cast<int>(n); ++label)
        CHECK(std::abs(schmidt_negativity(state, label) - negativity(rho, label)) < 1e-8);
    }
  }
  // general pure states, not only single-excitation ones
  for (int trial = 0; trial < 50; ++trial) {
    const CVector psi = normalized(random_vector(16));
    const auto rho = pure_density(psi, labels_upto(4));
    for (std::size_t p = 0; p < 4; ++p)
      CHECK(std::abs(schmidt_negativity(psi, 4, p) - negativity(rho, static_cast<int>(p + 1))) < 1e-8);
  }
}

TEST_CASE("single-excitation negativity closed form") {
  for (int trial = 0; trial < 50; ++trial) {
    const auto state = make_state(random_vector(3));
    for (int label = 1; label <= 3; ++label) {
      const double p = std::norm(state.amplitudes(label - 1));
      CHECK(schmidt_negativity(state, label) == doctest::Approx(std::sqrt(p * (1.0 - p))).epsilon(1e-10));
    }
  }
}

TEST_CASE("concurrence examples") {
  CHECK(concurrence(bell_pair()) == doctest::Approx(1.0).epsilon(1e-12));

  CVector product = kron(CVector(CVector::Unit(2, 0)), CVector(CVector::Unit(2, 1)));
  CHECK(concurrence(pure_density(product, {1, 2})) == 0.0);

  const auto w = density_from_pure(w_state(3));
  const auto pair = partial_trace(w, std::vector<int>{1, 3});
  CHECK(concurrence(pair) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(brute_concurrence(pair.rho) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  CHECK_THROWS_AS(concurrence(w), WrongQubitCount);
}

TEST_CASE("concurrence agrees with a general eigensolver") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto rho = random_mixed(2, 4);
    CHECK(std::abs(concurrence(rho) - brute_concurrence(rho.rho)) < 1e-8);
  }
  // The oracle takes square roots of round-off eigenvalues on rank-deficient
  // states, so it is only good to about 1e-7 there.
  for (int trial = 0; trial < 100; ++trial) {
    const auto rho = random_mixed(2, 1 + trial % 3);
    CHECK(std::abs(concurrence(rho) - brute_concurrence(rho.rho)) < 1e-6);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const auto state = make_state(random_vector(4));
    const auto pair = partial_trace(density_from_pure(state), std::vector<int>{2, 4});
    const double expected = 2.0 * std::abs(state.amplitudes(1) * state.amplitudes(3));
    CHECK(concurrence(pair) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(std::abs(brute_concurrence(pair.rho) - expected) < 1e-8);
  }
}

TEST_CASE("Wootters spectrum is nonnegative") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto values = wootters_eigenvalues(random_mixed(2, 1 + trial % 4));
    REQUIRE(values.size() == 4);
    CHECK(std::is_sorted(values.rbegin(), values.rend()));
    for (double v : values) CHECK(v >= -1e-10);
  }
}

TEST_CASE("concurrence is invariant under local unitaries") {
  for (int trial = 0; trial < 100; ++trial) {
    auto rho = trial % 2 == 0 ? random_mixed(2, 2) : partial_trace(density_from_pure(make_state(random_vector(3))),
                                                                   std::vector<int>{1, 2});
    const CMatrix u = kron(random_unitary(2), random_unitary(2));
    DensityMatrix rotated{rho.labels, u * rho.rho * u.adjoint()};
    CHECK(std::abs(concurrence(rotated) - concurrence(rho)) < 1e-8);
  }
}

TEST_CASE("product states carry no entanglement") {
  for (int trial = 0; trial < 100; ++trial) {
    const CVector two = random_product(2);
    CHECK(concurrence(pure_density(two, {1, 2})) < 1e-7);
    CHECK(negativity(pure_density(two, {1, 2}), 1) < 1e-12);

    const CVector three = random_product(3);
    const auto rho = pure_density(three, {1, 2, 3});
    for (int label = 1; label <= 3; ++label) {
      CHECK(negativity(rho, label) < 1e-12);
      CHECK(schmidt_negativity(three, 3, static_cast<std::size_t>(label - 1)) < 1e-7);
    }
    CHECK(tripartite_negativity(rho) < 1e-6);
  }
}
