#include "iel/system.hpp"

#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "iel/errors.hpp"

namespace iel {

bool ControlRange::contains(const Vec& u) const {
  for (int i = 0; i < dim(); ++i)
    if (u[i] < lo[i] || u[i] > hi[i]) return false;
  return true;
}

void ControlRange::validate() const {
  if (lo.size() != hi.size()) throw DomainError("control range: lo/hi dimension mismatch");
  for (int i = 0; i < dim(); ++i) {
    if (!(lo[i] < hi[i])) throw DomainError("control range: lo < hi must hold componentwise");
    if (!(lo[i] < 0.0 && 0.0 < hi[i]))
      throw DomainError("control range: 0 must lie strictly inside the box");
  }
  for (const Vec& l : letters) {
    if (l.size() != lo.size()) throw DomainError("control range: letter dimension mismatch");
    if (!contains(l)) throw DomainError("control range: letter outside the box");
  }
}

std::vector<Vec> ControlRange::default_letters(const Vec& lo, const Vec& hi) {
  const int m = static_cast<int>(lo.size());
  std::vector<Vec> out;
  const long count = static_cast<long>(std::pow(3.0, m));
  out.reserve(count);
  for (long code = 0; code < count; ++code) {
    Vec u(m);
    long c = code;
    for (int i = 0; i < m; ++i) {
      switch (c % 3) {
        case 0: u[i] = lo[i]; break;
        case 1: u[i] = 0.0; break;
        default: u[i] = hi[i]; break;
      }
      c /= 3;
    }
    out.push_back(std::move(u));
  }
  return out;
}

ControlSystem::ControlSystem(std::string family, int state_dim, int input_dim, Vec param,
                             Fields fields, Jacobians jacobians, ControlRange range,
                             Box state_box)
    : family_(std::move(family)),
      state_dim_(state_dim),
      input_dim_(input_dim),
      param_(std::move(param)),
      fields_(std::move(fields)),
      jacobians_(std::move(jacobians)),
      range_(std::move(range)),
      state_box_(std::move(state_box)) {
  if (state_dim_ < 1) throw DomainError("ControlSystem: state dimension must be >= 1");
  if (range_.dim() != input_dim_) throw DomainError("ControlSystem: control range dimension mismatch");
  if (state_box_.dim() != state_dim_) throw DomainError("ControlSystem: state box dimension mismatch");
  for (int i = 0; i < state_dim_; ++i)
    if (!(state_box_.lo[i] < state_box_.hi[i]))
      throw DomainError("ControlSystem: state box must have positive widths");
  range_.validate();
  if (range_.letters.empty())
    range_.letters = ControlRange::default_letters(range_.lo, range_.hi);
}

ControlSystem ControlSystem::with_param(Vec alpha) const {
  ControlSystem out = *this;
  out.param_ = std::move(alpha);
  return out;
}

void ControlSystem::rhs(const Vec& x, const Vec& u, Vec& dx, Workspace& ws) const {
  fields_(param_, x, ws.f);
  dx = ws.f[0];
  for (int i = 0; i < input_dim_; ++i) dx.noalias() += u[i] * ws.f[i + 1];
}

void ControlSystem::jacobian(const Vec& x, const Vec& u, Mat& J, Workspace& ws) const {
  if (jacobians_) {
    jacobians_(param_, x, ws.J);
    J = ws.J[0];
    for (int i = 0; i < input_dim_; ++i) J.noalias() += u[i] * ws.J[i + 1];
    return;
  }
  // central-difference fallback, h = 1e-6 (1 + |x|)
  const double h = 1e-6 * (1.0 + x.norm());
  J.resize(state_dim_, state_dim_);
  Vec xp, xm;
  for (int c = 0; c < state_dim_; ++c) {
    xp = x; xm = x;
    xp[c] += h;
    xm[c] -= h;
    rhs(xp, u, ws.fd_hi, ws);
    rhs(xm, u, ws.fd_lo, ws);
    J.col(c) = (ws.fd_hi - ws.fd_lo) / (2.0 * h);
  }
}

namespace {

using Fields = ControlSystem::Fields;
using Jacobians = ControlSystem::Jacobians;

void expect_params(const std::string& family, const Vec& alpha, int n) {
  if (static_cast<int>(alpha.size()) != n)
    throw DomainError("family '" + family + "' expects " + std::to_string(n) + " parameter(s), got " +
                      std::to_string(alpha.size()));
}

struct FamilyDef {
  int dim, inputs, params;
  Fields fields;
  Jacobians jacobians;
};

// xdot = a x + u
FamilyDef scalar_linear() {
  return {1, 1, 1,
          [](const Vec& a, const Vec& x, std::vector<Vec>& f) {
            f.resize(2);
            f[0].resize(1); f[0][0] = a[0] * x[0];
            f[1].resize(1); f[1][0] = 1.0;
          },
          [](const Vec& a, const Vec&, std::vector<Mat>& J) {
            J.resize(2);
            J[0].resize(1, 1); J[0](0, 0) = a[0];
            J[1].setZero(1, 1);
          }};
}

// xdot_i = a_i x_i + u_i
FamilyDef diag_linear_2d() {
  return {2, 2, 2,
          [](const Vec& a, const Vec& x, std::vector<Vec>& f) {
            f.resize(3);
            f[0].resize(2); f[0][0] = a[0] * x[0]; f[0][1] = a[1] * x[1];
            f[1].resize(2); f[1][0] = 1.0; f[1][1] = 0.0;
            f[2].resize(2); f[2][0] = 0.0; f[2][1] = 1.0;
          },
          [](const Vec& a, const Vec&, std::vector<Mat>& J) {
            J.resize(3);
            J[0].setZero(2, 2); J[0](0, 0) = a[0]; J[0](1, 1) = a[1];
            J[1].setZero(2, 2);
            J[2].setZero(2, 2);
          }};
}

// xdot = (A + u B) x, parameters packed row-major [A; B]
FamilyDef bilinear_2d() {
  auto unpack = [](const Vec& a, Mat& A, Mat& B) {
    A.resize(2, 2); B.resize(2, 2);
    A << a[0], a[1], a[2], a[3];
    B << a[4], a[5], a[6], a[7];
  };
  return {2, 1, 8,
          [unpack](const Vec& a, const Vec& x, std::vector<Vec>& f) {
            Mat A, B;
            unpack(a, A, B);
            f.resize(2);
            f[0] = A * x;
            f[1] = B * x;
          },
          [unpack](const Vec& a, const Vec&, std::vector<Mat>& J) {
            Mat A, B;
            unpack(a, A, B);
            J.resize(2);
            J[0] = A;
            J[1] = B;
          }};
}

// x1dot = x2, x2dot = x1 - x1^3 - delta x2 + u
FamilyDef duffing_controlled() {
  return {2, 1, 1,
          [](const Vec& a, const Vec& x, std::vector<Vec>& f) {
            f.resize(2);
            f[0].resize(2);
            f[0][0] = x[1];
            f[0][1] = x[0] - x[0] * x[0] * x[0] - a[0] * x[1];
            f[1].resize(2); f[1][0] = 0.0; f[1][1] = 1.0;
          },
          [](const Vec& a, const Vec& x, std::vector<Mat>& J) {
            J.resize(2);
            J[0].resize(2, 2);
            J[0] << 0.0, 1.0, 1.0 - 3.0 * x[0] * x[0], -a[0];
            J[1].setZero(2, 2);
          }};
}

// xdot = x - x^3 + g u
FamilyDef bistable_1d() {
  return {1, 1, 1,
          [](const Vec& a, const Vec& x, std::vector<Vec>& f) {
            f.resize(2);
            f[0].resize(1); f[0][0] = x[0] - x[0] * x[0] * x[0];
            f[1].resize(1); f[1][0] = a[0];
          },
          [](const Vec&, const Vec& x, std::vector<Mat>& J) {
            J.resize(2);
            J[0].resize(1, 1); J[0](0, 0) = 1.0 - 3.0 * x[0] * x[0];
            J[1].setZero(1, 1);
          }};
}

FamilyDef builtin(const std::string& family) {
  if (family == "scalar_linear") return scalar_linear();
  if (family == "diag_linear_2d") return diag_linear_2d();
  if (family == "bilinear_2d") return bilinear_2d();
  if (family == "duffing_controlled") return duffing_controlled();
  if (family == "bistable_1d") return bistable_1d();
  throw DomainError("unknown builtin family '" + family + "'");
}

}  // namespace

bool is_builtin_family(const std::string& family) {
  return family == "scalar_linear" || family == "diag_linear_2d" || family == "bilinear_2d" ||
         family == "duffing_controlled" || family == "bistable_1d";
}

ControlSystem make_builtin_system(const std::string& family, const Vec& alpha,
                                  const ControlRange& range, const Box& state_box) {
  FamilyDef def = builtin(family);
  expect_params(family, alpha, def.params);
  return ControlSystem(family, def.dim, def.inputs, alpha, def.fields, def.jacobians, range,
                       state_box);
}

namespace {

Vec vec_from_json(const nlohmann::json& j, const std::string& ptr, std::vector<std::string>& bad) {
  if (!j.is_array() || j.empty()) {
    bad.push_back(ptr);
    return Vec();
  }
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      bad.push_back(ptr + "/" + std::to_string(i));
      return Vec();
    }
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace

ControlSystem load_system_json(const nlohmann::json& doc) {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& msg) { throw ConfigInvalid(bad, "system document: " + msg); };

  if (!doc.is_object()) {
    bad.push_back("");
    fail("not an object");
  }
  if (!doc.contains("fields") || !doc["fields"].is_string()) {
    bad.push_back("/fields");
    fail("missing or non-string 'fields'");
  }
  const std::string family = doc["fields"].get<std::string>();
  if (!is_builtin_family(family)) {
    bad.push_back("/fields");
    fail("unknown family '" + family + "'");
  }
  if (!doc.contains("params")) {
    bad.push_back("/params");
    fail("missing 'params'");
  }
  Vec alpha = vec_from_json(doc["params"], "/params", bad);
  if (!bad.empty()) fail("bad 'params'");

  auto box_from = [&](const char* key) -> Box {
    if (!doc.contains(key) || !doc[key].is_object()) {
      bad.push_back(std::string("/") + key);
      fail(std::string("missing '") + key + "'");
    }
    const auto& b = doc[key];
    Box out;
    if (!b.contains("lo")) { bad.push_back(std::string("/") + key + "/lo"); fail("missing lo"); }
    if (!b.contains("hi")) { bad.push_back(std::string("/") + key + "/hi"); fail("missing hi"); }
    out.lo = vec_from_json(b["lo"], std::string("/") + key + "/lo", bad);
    out.hi = vec_from_json(b["hi"], std::string("/") + key + "/hi", bad);
    if (!bad.empty()) fail("bad box bounds");
    return out;
  };

  ControlRange range;
  {
    Box cb = box_from("control_box");
    range.lo = cb.lo;
    range.hi = cb.hi;
  }
  if (doc.contains("letters")) {
    if (!doc["letters"].is_array()) {
      bad.push_back("/letters");
      fail("'letters' must be an array of control values");
    }
    for (std::size_t i = 0; i < doc["letters"].size(); ++i) {
      range.letters.push_back(
          vec_from_json(doc["letters"][i], "/letters/" + std::to_string(i), bad));
      if (!bad.empty()) fail("bad letter");
    }
  }
  Box state_box = box_from("state_box");

  if (doc.contains("dim")) {
    if (!doc["dim"].is_number_integer() ||
        doc["dim"].get<int>() != static_cast<int>(state_box.lo.size())) {
      bad.push_back("/dim");
      fail("'dim' disagrees with state_box");
    }
  }

  try {
    return make_builtin_system(family, alpha, range, state_box);
  } catch (const DomainError& e) {
    bad.push_back("");
    throw ConfigInvalid(bad, std::string("system document: ") + e.what());
  }
}

}  // namespace iel
