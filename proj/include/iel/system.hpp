#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "iel/types.hpp"

namespace iel {

/// Compact convex control range U together with the finite letter alphabet
/// used by all downstream enumerations.
struct ControlRange {
  Vec lo, hi;                // box bounds; 0 strictly inside
  std::vector<Vec> letters;  // finite alphabet, each letter inside the box

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& u) const;
  void validate() const;  // throws DomainError on a violated invariant

  /// The {lo, 0, hi}^m lattice (3^m letters).
  static std::vector<Vec> default_letters(const Vec& lo, const Vec& hi);
};

/// Parametrized control-affine system: evaluators for f_0..f_m and their
/// state Jacobians, a control range and a compact working box.
/// Immutable after construction; safe to share across threads.
class ControlSystem {
 public:
  // f has size m+1: drift followed by the input fields, each in R^d.
  using Fields = std::function<void(const Vec& alpha, const Vec& x, std::vector<Vec>& f)>;
  // J has size m+1: state Jacobians of the fields, each d x d.
  using Jacobians = std::function<void(const Vec& alpha, const Vec& x, std::vector<Mat>& J)>;

  ControlSystem(std::string family, int state_dim, int input_dim, Vec param, Fields fields,
                Jacobians jacobians, ControlRange range, Box state_box);

  const std::string& family() const { return family_; }
  int state_dim() const { return state_dim_; }
  int input_dim() const { return input_dim_; }
  const Vec& param() const { return param_; }
  const ControlRange& control_range() const { return range_; }
  const Box& state_box() const { return state_box_; }
  bool analytic_jacobian() const { return static_cast<bool>(jacobians_); }

  /// Same family and geometry with a different parameter vector.
  ControlSystem with_param(Vec alpha) const;

  struct Workspace {
    std::vector<Vec> f;
    std::vector<Mat> J;
    Vec fd_lo, fd_hi;
  };

  /// dx = f_0(alpha,x) + sum_i u_i f_i(alpha,x)
  void rhs(const Vec& x, const Vec& u, Vec& dx, Workspace& ws) const;
  /// J = d/dx [f_0 + sum u_i f_i]; analytic when supplied, otherwise central
  /// differences with h = 1e-6 (1 + |x|).
  void jacobian(const Vec& x, const Vec& u, Mat& J, Workspace& ws) const;

  void eval_fields(const Vec& x, std::vector<Vec>& f) const { fields_(param_, x, f); }

 private:
  std::string family_;
  int state_dim_, input_dim_;
  Vec param_;
  Fields fields_;
  Jacobians jacobians_;
  ControlRange range_;
  Box state_box_;
};

/// Registered closed-form families: scalar_linear, diag_linear_2d,
/// bilinear_2d, duffing_controlled, bistable_1d.
ControlSystem make_builtin_system(const std::string& family, const Vec& alpha,
                                  const ControlRange& range, const Box& state_box);

bool is_builtin_family(const std::string& family);

/// Loads a system document: fields dim, fields (family name), params,
/// control_box, letters (optional), state_box. Throws ConfigInvalid with
/// JSON-pointer paths on malformed input.
ControlSystem load_system_json(const nlohmann::json& doc);

}  // namespace iel
