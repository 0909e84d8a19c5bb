#include "spinbath/linsolve3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinbath {

namespace {

constexpr double kRelTol = 1e-9;

bool root_less(const complexd& lhs, const complexd& rhs) {
  if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
  return lhs.imag() < rhs.imag();
}

double coeff_scale(const SectorCoefficients& c) {
  double s = 1.0;
  for (double v : {c.a, c.b, c.c, c.d, c.e, c.f, c.g}) {
    s = std::max(s, std::abs(v));
  }
  return s;
}

}  // namespace

std::array<complexd, 3> solve_cubic(const CubicCoefficients& c) {
  if (c.a1 == 0.0) {
    throw std::domain_error("solve_cubic: leading coefficient is zero");
  }
  const double a1 = c.a1, b1 = c.b1, c1 = c.c1, d1 = c.d1;
  const double delta0 = b1 * b1 - 3.0 * a1 * c1;
  const double delta1 =
      2.0 * b1 * b1 * b1 - 9.0 * a1 * b1 * c1 + 27.0 * a1 * a1 * d1;

  // Q = cbrt((delta1 +/- sqrt(delta1^2 - 4 delta0^3)) / 2); the sign is
  // chosen to keep the numerator away from cancellation. Either branch is
  // exact since the two choices multiply to delta0^3.
  const complexd disc_root =
      std::sqrt(complexd(delta1 * delta1 - 4.0 * delta0 * delta0 * delta0));
  complexd numerator = complexd(delta1) + disc_root;
  if (std::abs(numerator) < std::abs(complexd(delta1) - disc_root)) {
    numerator = complexd(delta1) - disc_root;
  }
  const complexd q = std::pow(numerator / 2.0, 1.0 / 3.0);

  std::array<complexd, 3> roots;
  if (std::abs(q) == 0.0) {
    // delta0 = delta1 = 0: triple root.
    roots.fill(complexd(-b1 / (3.0 * a1)));
    return roots;
  }
  const complexd phi(-0.5, std::sqrt(3.0) / 2.0);
  complexd phik(1.0, 0.0);
  for (int k = 0; k < 3; ++k) {
    phik *= phi;
    const complexd qk = phik * q;
    roots[k] = -(complexd(b1) + qk + complexd(delta0) / qk) / (3.0 * a1);
  }
  std::sort(roots.begin(), roots.end(), root_less);
  return roots;
}

Eigen::Matrix3d sector_matrix(const SectorCoefficients& c) {
  Eigen::Matrix3d m;
  m << c.a, c.d, c.e,
       c.f, c.b, 0.0,
       c.g, 0.0, c.c;
  return m;
}

SectorSolution sector_eigensystem(const SectorCoefficients& c) {
  const double tol = kRelTol * coeff_scale(c);
  const CubicCoefficients cubic{
      1.0,
      -(c.a + c.b + c.c),
      c.a * c.b + c.b * c.c + c.a * c.c - c.f * c.d - c.e * c.g,
      c.f * c.d * c.c + c.e * c.g * c.b - c.a * c.b * c.c};
  const auto roots = solve_cubic(cubic);

  bool fallback = false;
  std::array<double, 3> lambdas{};
  for (int j = 0; j < 3; ++j) {
    if (std::abs(roots[j].imag()) > tol) fallback = true;
    lambdas[j] = roots[j].real();
  }
  if (!fallback) {
    // The eigenvector formula degenerates when an eigenvalue meets b or c,
    // and repeated eigenvalues make the boundary system singular.
    fallback = (lambdas[1] - lambdas[0] < tol) || (lambdas[2] - lambdas[1] < tol);
    for (double l : lambdas) {
      if (std::abs(l - c.b) < tol || std::abs(l - c.c) < tol) fallback = true;
    }
  }
  if (fallback) return sector_eigensystem_numeric(c);

  SectorSolution sol;
  sol.lambdas = lambdas;
  for (int j = 0; j < 3; ++j) {
    const double l = lambdas[j];
    sol.vecs[j] =
        Eigen::Vector3d((l - c.b) * (l - c.c), c.f * (l - c.c), c.g * (l - c.b));
  }
  return sol;
}

SectorSolution sector_eigensystem_numeric(const SectorCoefficients& c) {
  const double tol = 1e-6 * coeff_scale(c);
  Eigen::EigenSolver<Eigen::Matrix3d> es(sector_matrix(c));
  if (es.info() != Eigen::Success) {
    throw std::domain_error("sector_eigensystem_numeric: eigensolver failed");
  }

  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return es.eigenvalues()[i].real() < es.eigenvalues()[j].real();
  });

  SectorSolution sol;
  sol.degenerate_fallback_used = true;
  for (int j = 0; j < 3; ++j) {
    const complexd lambda = es.eigenvalues()[order[j]];
    if (std::abs(lambda.imag()) > tol) {
      throw std::domain_error(
          "sector_eigensystem_numeric: complex eigenvalues; coefficients are "
          "outside the symmetrizable family (d*f >= 0, e*g >= 0)");
    }
    sol.lambdas[j] = lambda.real();
    Eigen::Vector3cd v = es.eigenvectors().col(order[j]);
    // Rotate away any residual complex phase before taking the real part.
    int piv = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(v[i]) > std::abs(v[piv])) piv = i;
    }
    if (std::abs(v[piv]) > 0.0) v *= std::conj(v[piv]) / std::abs(v[piv]);
    sol.vecs[j] = v.real();
  }
  return sol;
}

SectorSolution boundary_weights(SectorSolution sol) {
  bool solved = false;
  if (!sol.degenerate_fallback_used) {
    const auto& v1 = sol.vecs[0];
    const auto& v2 = sol.vecs[1];
    const auto& v3 = sol.vecs[2];
    const double num1 = v3[1] * v2[2] - v2[1] * v3[2];
    const double num2 = v1[1] * v3[2] - v3[1] * v1[2];
    const double num3 = v2[1] * v1[2] - v1[1] * v2[2];
    const double t1 = v1[0] * num1, t2 = v2[0] * num2, t3 = v3[0] * num3;
    const double den = t1 + t2 + t3;
    const double term_scale =
        std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1e-300});
    if (std::abs(den) > 1e-12 * term_scale) {
      sol.weights = {complexd(num1 / den), complexd(num2 / den),
                     complexd(num3 / den)};
      solved = true;
    }
  }
  if (!solved) {
    Eigen::Matrix3d v;
    v.col(0) = sol.vecs[0];
    v.col(1) = sol.vecs[1];
    v.col(2) = sol.vecs[2];
    const Eigen::Vector3d w =
        v.colPivHouseholderQr().solve(Eigen::Vector3d(1.0, 0.0, 0.0));
    sol.weights = {complexd(w[0]), complexd(w[1]), complexd(w[2])};
  }
  return sol;
}

SectorSolution solve_sector(const SectorCoefficients& c) {
  return boundary_weights(sector_eigensystem(c));
}

AmplitudeTriple amplitudes_at(const SectorSolution& sol, double t) {
  complexd acc[3] = {};
  for (int j = 0; j < 3; ++j) {
    const double lt = sol.lambdas[j] * t;
    const complexd factor = sol.weights[j] * complexd(std::cos(lt), -std::sin(lt));
    acc[0] += factor * sol.vecs[j][0];
    acc[1] += factor * sol.vecs[j][1];
    acc[2] += factor * sol.vecs[j][2];
  }
  return {acc[0], acc[1], acc[2]};
}

}  // namespace spinbath
