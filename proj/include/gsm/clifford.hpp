#pragma once

/// Fiber algebra of the real 4-dimensional spinor module S = Σ ⊕ Σ over Cl(0,2).
///
/// Canonical representation (fixed once, used everywhere):
///
///   Σ ≅ R², with the Cl(2,0) generators acting as the real symmetric matrices
///
///     γ⁺(e₁) = [ 1  0 ]      γ⁺(e₂) = [ 0  1 ]
///              [ 0 -1 ]               [ 1  0 ]
///
///   A spinor is stored as (s⁰₁, s⁰₂, s¹₁, s¹₂) and Clifford multiplication on S
///   is the odd block matrix  γ(X) = [[0, -γ⁺(X)], [γ⁺(X), 0]], i.e.
///
///     γ(e₁) = [ 0  0 -1  0 ]      γ(e₂) = [ 0  0  0 -1 ]
///             [ 0  0  0  1 ]              [ 0  0 -1  0 ]
///             [ 1  0  0  0 ]              [ 0  1  0  0 ]
///             [ 0 -1  0  0 ]              [ 1  0  0  0 ]
///
///   Both square to -1 and are skew-symmetric for the Euclidean inner product.
///   J_Σ is left multiplication by ω = γ⁺(e₁)γ⁺(e₂) = [[0, 1], [-1, 0]].
///   On S the volume element γ(e₁)γ(e₂) acts as -(J_Σ ⊕ J_Σ).

#include <Eigen/Core>

namespace gsm {

template <typename Scalar>
using Spinor = Eigen::Matrix<Scalar, 4, 1>;

/// Coefficients of a tangent vector in the orthonormal frame {e₁, e₂}.
template <typename Scalar>
using TangentVector2 = Eigen::Matrix<Scalar, 2, 1>;

/// χ = χ¹ ⊗ e₁ + χ² ⊗ e₂; column α holds χ^α.
template <typename Scalar>
using SpinorTangent = Eigen::Matrix<Scalar, 4, 2>;

enum class Quaternionic { I, J, K };

namespace clifford {

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> gamma_plus(int alpha) {
  Eigen::Matrix<Scalar, 2, 2> g;
  if (alpha == 0)
    g << 1, 0, 0, -1;
  else
    g << 0, 1, 1, 0;
  return g;
}

/// ω acting on Σ.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> j_sigma() {
  Eigen::Matrix<Scalar, 2, 2> w;
  w << 0, 1, -1, 0;
  return w;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> gamma(int alpha) {
  Eigen::Matrix<Scalar, 4, 4> g = Eigen::Matrix<Scalar, 4, 4>::Zero();
  const auto gp = gamma_plus<Scalar>(alpha);
  g.template block<2, 2>(0, 2) = -gp;
  g.template block<2, 2>(2, 0) = gp;
  return g;
}

/// γ(e_α)γ(e_β) for α, β ∈ {0, 1}.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> gamma_product(int alpha, int beta) {
  return gamma<Scalar>(alpha) * gamma<Scalar>(beta);
}

}  // namespace clifford

template <typename Scalar>
Spinor<Scalar> clifford_mul(const TangentVector2<Scalar>& v, const Spinor<Scalar>& s) {
  return v(0) * (clifford::gamma<Scalar>(0) * s) + v(1) * (clifford::gamma<Scalar>(1) * s);
}

template <typename Scalar>
Scalar spinor_inner(const Spinor<Scalar>& s, const Spinor<Scalar>& t) {
  return s.dot(t);
}

template <typename Scalar>
Spinor<Scalar> volume_mul(const Spinor<Scalar>& s) {
  return clifford::gamma_product<Scalar>(0, 1) * s;
}

template <typename Scalar>
Spinor<Scalar> quaternionic_structure(Quaternionic which, const Spinor<Scalar>& s) {
  const auto js = clifford::j_sigma<Scalar>();
  const Eigen::Matrix<Scalar, 2, 1> s0 = s.template head<2>();
  const Eigen::Matrix<Scalar, 2, 1> s1 = s.template tail<2>();
  Spinor<Scalar> out;
  switch (which) {
    case Quaternionic::I:
      out << -s1, s0;
      break;
    case Quaternionic::J:
      out << js * s0, -(js * s1);
      break;
    case Quaternionic::K:
      out << js * s1, js * s0;
      break;
  }
  return out;
}

/// γ(χ) = e₁·χ¹ + e₂·χ².
template <typename Scalar>
Spinor<Scalar> gamma_contract(const SpinorTangent<Scalar>& chi) {
  return clifford::gamma<Scalar>(0) * chi.col(0) + clifford::gamma<Scalar>(1) * chi.col(1);
}

/// Right inverse of gamma_contract: σ(s) = -½ Σ_α e_α·s ⊗ e_α.
template <typename Scalar>
SpinorTangent<Scalar> sigma_lift(const Spinor<Scalar>& s) {
  SpinorTangent<Scalar> out;
  out.col(0) = Scalar(-0.5) * (clifford::gamma<Scalar>(0) * s);
  out.col(1) = Scalar(-0.5) * (clifford::gamma<Scalar>(1) * s);
  return out;
}

/// (Pχ)^β = -½ Σ_α e_β·e_α·χ^α
template <typename Scalar>
SpinorTangent<Scalar> p_project(const SpinorTangent<Scalar>& chi) {
  SpinorTangent<Scalar> out = SpinorTangent<Scalar>::Zero();
  for (int beta = 0; beta < 2; ++beta)
    for (int alpha = 0; alpha < 2; ++alpha)
      out.col(beta) -= Scalar(0.5) * (clifford::gamma_product<Scalar>(beta, alpha) * chi.col(alpha));
  return out;
}

/// (Qχ)^β = -½ Σ_α e_α·e_β·χ^α
template <typename Scalar>
SpinorTangent<Scalar> q_project(const SpinorTangent<Scalar>& chi) {
  SpinorTangent<Scalar> out = SpinorTangent<Scalar>::Zero();
  for (int beta = 0; beta < 2; ++beta)
    for (int alpha = 0; alpha < 2; ++alpha)
      out.col(beta) -= Scalar(0.5) * (clifford::gamma_product<Scalar>(alpha, beta) * chi.col(alpha));
  return out;
}

/// Inner product on S ⊗ TM with an orthonormal frame.
template <typename Scalar>
Scalar spinor_tangent_inner(const SpinorTangent<Scalar>& a, const SpinorTangent<Scalar>& b) {
  return (a.array() * b.array()).sum();
}

/// |Qχ|² computed as ⟨χ, Qχ⟩.
template <typename Scalar>
Scalar q_norm_squared(const SpinorTangent<Scalar>& chi) {
  return spinor_tangent_inner<Scalar>(chi, q_project<Scalar>(chi));
}

}  // namespace gsm
