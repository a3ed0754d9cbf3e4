#pragma once

#include <string>
#include <variant>

namespace biofilm {

/// Which clock a time-dependent signal reads.
enum class TimeBasis { Time, StepIndex };

/// Time-dependent scalar input (nutrient or antibiotic energy density).
class ForcingSignal {
 public:
  struct Constant {
    double value = 0.0;
    bool operator==(const Constant&) const = default;
  };
  /// offset + amplitude * sin(angular_frequency * clock)
  struct Sinusoid {
    double offset = 0.0;
    double amplitude = 0.0;
    double angular_frequency = 0.0;
    TimeBasis basis = TimeBasis::Time;
    bool operator==(const Sinusoid&) const = default;
  };
  /// `before` up to and including `switch_at`, `after` strictly beyond it.
  struct Step {
    double switch_at = 0.0;
    double before = 0.0;
    double after = 0.0;
    TimeBasis basis = TimeBasis::StepIndex;
    bool operator==(const Step&) const = default;
  };
  using Shape = std::variant<Constant, Sinusoid, Step>;

  ForcingSignal() = default;
  ForcingSignal(Shape shape) : shape_(shape) {}  // NOLINT(google-explicit-constructor)
  ForcingSignal(Constant c) : shape_(c) {}        // NOLINT(google-explicit-constructor)
  ForcingSignal(Sinusoid s) : shape_(s) {}        // NOLINT(google-explicit-constructor)
  ForcingSignal(Step s) : shape_(s) {}            // NOLINT(google-explicit-constructor)

  static ForcingSignal constant(double value) { return Constant{value}; }

  double evaluate(double t, long step_index) const;

  const Shape& shape() const { return shape_; }
  std::string kind() const;
  std::string describe() const;

  bool operator==(const ForcingSignal&) const = default;

 private:
  Shape shape_ = Constant{};
};

}  // namespace biofilm
