#include "biofilm/forcing.hpp"

#include <cmath>
#include <sstream>

namespace biofilm {

namespace {

double clock(TimeBasis basis, double t, long step_index) {
  return basis == TimeBasis::Time ? t : static_cast<double>(step_index);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double ForcingSignal::evaluate(double t, long step_index) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [&](const Sinusoid& s) {
            return s.offset + s.amplitude * std::sin(s.angular_frequency * clock(s.basis, t, step_index));
          },
          [&](const Step& s) { return clock(s.basis, t, step_index) > s.switch_at ? s.after : s.before; },
      },
      shape_);
}

std::string ForcingSignal::kind() const {
  return std::visit(Overloaded{
                        [](const Constant&) { return std::string("constant"); },
                        [](const Sinusoid&) { return std::string("sinusoid"); },
                        [](const Step&) { return std::string("step"); },
                    },
                    shape_);
}

std::string ForcingSignal::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Constant& c) { os << c.value; },
                 [&](const Sinusoid& s) {
                   os << s.offset << " + " << s.amplitude << " sin(" << s.angular_frequency
                      << (s.basis == TimeBasis::Time ? " t)" : " k)");
                 },
                 [&](const Step& s) {
                   os << s.before << " -> " << s.after << " after "
                      << (s.basis == TimeBasis::Time ? "t = " : "step ") << s.switch_at;
                 },
             },
             shape_);
  return os.str();
}

}  // namespace biofilm
