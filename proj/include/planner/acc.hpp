#pragma once

#include <Eigen/Dense>

#include "planner/errors.hpp"

namespace planner {

// Upper-controller parameters: headway policy, lag model of the lower
// controller + vehicle, LQR weights, sampling time, and the command bound.
struct AccParams {
  double tau_h = 1.5;            // headway time, s
  double d0 = 5.0;               // standstill distance, m
  double T_L = 0.5;              // lower-loop lag time constant, s
  double K_L = 1.0;              // lower-loop gain
  double T = 0.05;               // controller sampling time, s
  Eigen::Vector3d rho{1.0, 1.0, 0.5};  // state weights
  double r = 1.0;                // input weight
  double u_max = 0.25 * 9.81;    // command saturation, m/s^2

  void validate() const;
};

// Gap/velocity/acceleration state: d_error = d_desire - d, v_rel = v_p - v_f,
// a_f = following-vehicle acceleration.
struct AccState {
  double d_error = 0.0;
  double v_rel = 0.0;
  double a_f = 0.0;

  Eigen::Vector3d vec() const { return {d_error, v_rel, a_f}; }
  static AccState from_vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
};

// Continuous three-state model and its exact zero-order-hold discretization.
struct AccModel {
  Eigen::Matrix3d A;
  Eigen::Vector3d B;
  Eigen::Vector3d Gamma;  // disturbance map (preceding-vehicle acceleration)
  Eigen::Matrix3d C;      // identity: all states measured
  Eigen::Matrix3d Ad;
  Eigen::Vector3d Bd;
  Eigen::Vector3d Gd;     // discretized disturbance map
  double T = 0.05;
};

// d_desire = tau_h * v_f + d0. Throws NegativeSpeed.
double desired_distance(double v_f, const AccParams& params);

// Builds the state-space model and discretizes it by zero-order hold.
// Asserts full-rank observability of (Ad, C).
AccModel build_model(const AccParams& params);

// Infinite-horizon discrete Riccati fixed point:
//   P <- Q + A'PA - A'PB (R + B'PB)^-1 B'PA
// Throws RiccatiDivergence / UnstabilizablePair.
Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                           double tol = 1e-12, int max_iterations = 1000000);

// LQR gain for u = -K x on the discretized model. The returned closed loop
// Ad - Bd*K is verified Schur-stable.
Eigen::RowVector3d solve_lqr(const AccModel& model, const AccParams& params);

struct KalmanFilter {
  Eigen::Vector3d estimate = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d q_proc = Eigen::Matrix3d::Identity() * 1e-3;
  Eigen::Matrix3d r_meas = Eigen::Vector3d(0.25, 0.04, 0.01).asDiagonal();
};

// One predict (with the applied input) + update (C = I) cycle; Joseph-form
// covariance update keeps the covariance symmetric PSD.
KalmanFilter kalman_step(KalmanFilter filter, const AccModel& model, double u,
                         const AccState& measurement);

// LQR on Kalman-filtered state estimates with command saturation.
class LqgController {
 public:
  explicit LqgController(const AccParams& params,
                         const Eigen::Matrix3d& q_proc =
                             Eigen::Matrix3d::Identity() * 1e-3,
                         const Eigen::Matrix3d& r_meas =
                             Eigen::Vector3d(0.25, 0.04, 0.01).asDiagonal());

  // Filters the measurement (predicting with the previously applied input),
  // then returns u = clamp(-K x_hat, -u_max, u_max).
  double acc_command(const AccState& measured);

  void reset(const AccState& x0, const Eigen::Matrix3d& covariance);

  const AccModel& model() const { return model_; }
  const Eigen::RowVector3d& gain() const { return gain_; }
  const KalmanFilter& filter() const { return filter_; }
  const AccParams& params() const { return params_; }

 private:
  AccParams params_;
  AccModel model_;
  Eigen::RowVector3d gain_;
  KalmanFilter filter_;
  double last_u_ = 0.0;
};

inline double acc_command(LqgController& ctrl, const AccState& measured) {
  return ctrl.acc_command(measured);
}

}  // namespace planner
