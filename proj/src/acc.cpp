#include "planner/acc.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace planner {

void AccParams::validate() const {
  if (tau_h <= 0.0 || T_L <= 0.0 || T <= 0.0)
    throw Error("AccParams: tau_h, T_L and T must be positive");
  if (K_L <= 0.0) throw Error("AccParams: K_L must be positive");
  if (rho.minCoeff() < 0.0 || rho.maxCoeff() <= 0.0)
    throw Error("AccParams: state weights must be nonnegative with one positive");
  if (r <= 0.0) throw Error("AccParams: input weight must be positive");
  if (u_max <= 0.0) throw Error("AccParams: u_max must be positive");
}

double desired_distance(double v_f, const AccParams& params) {
  if (v_f < 0.0) throw NegativeSpeed("desired_distance: v_f must be nonnegative");
  return params.tau_h * v_f + params.d0;
}

AccModel build_model(const AccParams& params) {
  params.validate();
  AccModel m;
  m.T = params.T;
  m.A << 0.0, -1.0, params.tau_h,
         0.0, 0.0, -1.0,
         0.0, 0.0, -1.0 / params.T_L;
  m.B << 0.0, 0.0, params.K_L / params.T_L;
  m.Gamma << 0.0, 1.0, 0.0;
  m.C = Eigen::Matrix3d::Identity();

  // Exact zero-order hold of A, [B Gamma] via the augmented exponential.
  Eigen::Matrix<double, 5, 5> aug = Eigen::Matrix<double, 5, 5>::Zero();
  aug.topLeftCorner<3, 3>() = m.A;
  aug.block<3, 1>(0, 3) = m.B;
  aug.block<3, 1>(0, 4) = m.Gamma;
  const Eigen::Matrix<double, 5, 5> expm = (aug * params.T).exp();
  m.Ad = expm.topLeftCorner<3, 3>();
  m.Bd = expm.block<3, 1>(0, 3);
  m.Gd = expm.block<3, 1>(0, 4);

  Eigen::Matrix<double, 9, 3> obsv;
  obsv.block<3, 3>(0, 0) = m.C;
  obsv.block<3, 3>(3, 0) = m.C * m.Ad;
  obsv.block<3, 3>(6, 0) = m.C * m.Ad * m.Ad;
  if (Eigen::FullPivLU<Eigen::Matrix<double, 9, 3>>(obsv).rank() != 3)
    throw Error("build_model: (Ad, C) is not observable");
  return m;
}

Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                           double tol, int max_iterations) {
  Eigen::MatrixXd P = Q;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::MatrixXd BtP = B.transpose() * P;
    const Eigen::MatrixXd S = R + BtP * B;
    const Eigen::MatrixXd next =
        Q + A.transpose() * P * A -
        (BtP * A).transpose() * S.ldlt().solve(BtP * A);
    // Tolerance relative to the iterate scale; an absolute 1e-12 is finer
    // than double resolution once P grows past ~1e4.
    const double delta = (next - P).cwiseAbs().maxCoeff();
    P = next;
    if (!P.allFinite() || P.cwiseAbs().maxCoeff() > 1e14)
      throw UnstabilizablePair("solve_dare: Riccati iterates diverge");
    if (delta < tol * std::max(1.0, P.cwiseAbs().maxCoeff())) return P;
  }
  throw RiccatiDivergence("solve_dare: no fixed point within iteration budget");
}

Eigen::RowVector3d solve_lqr(const AccModel& model, const AccParams& params) {
  const Eigen::Matrix3d Q = params.rho.asDiagonal();
  Eigen::MatrixXd R(1, 1);
  R(0, 0) = params.r;
  const Eigen::MatrixXd P = solve_dare(model.Ad, model.Bd, Q, R);

  const Eigen::MatrixXd S = R + model.Bd.transpose() * P * model.Bd;
  const Eigen::RowVector3d K =
      (S.inverse() * model.Bd.transpose() * P * model.Ad).row(0);

  const Eigen::Matrix3d closed = model.Ad - model.Bd * K;
  const double radius = Eigen::EigenSolver<Eigen::Matrix3d>(closed, false)
                            .eigenvalues().cwiseAbs().maxCoeff();
  if (radius >= 1.0)
    throw UnstabilizablePair("solve_lqr: closed loop is not Schur-stable");
  return K;
}

KalmanFilter kalman_step(KalmanFilter filter, const AccModel& model, double u,
                         const AccState& measurement) {
  const Eigen::Vector3d x_prior = model.Ad * filter.estimate + model.Bd * u;
  const Eigen::Matrix3d p_prior =
      model.Ad * filter.covariance * model.Ad.transpose() + filter.q_proc;

  const Eigen::Matrix3d S = p_prior + filter.r_meas;  // C = I
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(S);
  if (!lu.isInvertible())
    throw SingularInnovationCovariance("kalman_step: singular innovation covariance");
  const Eigen::Matrix3d gain = p_prior * lu.inverse();

  filter.estimate = x_prior + gain * (measurement.vec() - x_prior);
  const Eigen::Matrix3d ikc = Eigen::Matrix3d::Identity() - gain;
  Eigen::Matrix3d post = ikc * p_prior * ikc.transpose() +
                         gain * filter.r_meas * gain.transpose();
  filter.covariance = 0.5 * (post + post.transpose());
  return filter;
}

LqgController::LqgController(const AccParams& params, const Eigen::Matrix3d& q_proc,
                             const Eigen::Matrix3d& r_meas)
    : params_(params), model_(build_model(params)), gain_(solve_lqr(model_, params)) {
  filter_.q_proc = q_proc;
  filter_.r_meas = r_meas;
}

double LqgController::acc_command(const AccState& measured) {
  filter_ = kalman_step(filter_, model_, last_u_, measured);
  const double raw = -(gain_ * filter_.estimate)(0);
  last_u_ = std::clamp(raw, -params_.u_max, params_.u_max);
  return last_u_;
}

void LqgController::reset(const AccState& x0, const Eigen::Matrix3d& covariance) {
  filter_.estimate = x0.vec();
  filter_.covariance = covariance;
  last_u_ = 0.0;
}

}  // namespace planner
