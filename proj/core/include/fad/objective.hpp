#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "fad/types.hpp"

namespace fad {

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An optimizable function with analytic gradient. Evaluations are pure and
/// deterministic; instances are safe to share across threads.
class Objective {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  Objective() = default;
  Objective(int dim, std::string name, ValueFn value, GradientFn gradient)
      : dim_(dim),
        name_(std::move(name)),
        value_(std::move(value)),
        gradient_(std::move(gradient)) {}

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }

  double value(const Vector& x) const {
    check_dim(x);
    return value_(x);
  }

  Vector gradient(const Vector& x) const {
    check_dim(x);
    return gradient_(x);
  }

  /// Force F(x) = -grad f(x).
  Vector force(const Vector& x) const { return -gradient(x); }

  void set_known_minimum(Vector location, double energy) {
    min_location_ = std::move(location);
    min_energy_ = energy;
  }

  /// Known minimum energy without a known location (cluster references).
  void set_reference_energy(double energy) { min_energy_ = energy; }

  bool has_known_minimum() const { return min_location_.has_value(); }
  bool has_reference_energy() const { return min_energy_.has_value(); }
  const Vector& min_location() const { return *min_location_; }
  double min_energy() const { return *min_energy_; }

 private:
  void check_dim(const Vector& x) const {
    if (x.size() != dim_)
      throw InputError("objective '" + name_ + "': expected dimension " +
                       std::to_string(dim_) + ", got " +
                       std::to_string(x.size()));
  }

  int dim_ = 0;
  std::string name_;
  ValueFn value_;
  GradientFn gradient_;
  std::optional<Vector> min_location_;
  std::optional<double> min_energy_;
};

}  // namespace fad
