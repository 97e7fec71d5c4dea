#ifndef MOTIVIC_RATIONAL_HPP
#define MOTIVIC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace motivic {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Domain errors, named after the conditions they signal.
struct NonConvergent : std::runtime_error {
  explicit NonConvergent(const std::string& m) : std::runtime_error("NonConvergent: " + m) {}
};
struct PoleAtOne : std::runtime_error {
  explicit PoleAtOne(const std::string& m) : std::runtime_error("PoleAtOne: " + m) {}
};
struct MissingSymbol : std::runtime_error {
  explicit MissingSymbol(const std::string& m) : std::runtime_error("MissingSymbol: " + m) {}
};
struct TrivialIdeal : std::runtime_error {
  explicit TrivialIdeal(const std::string& m) : std::runtime_error("TrivialIdeal: " + m) {}
};
struct InvalidSpec : std::runtime_error {
  explicit InvalidSpec(const std::string& m) : std::runtime_error("InvalidSpec: " + m) {}
};
struct NonIntegrable : std::runtime_error {
  explicit NonIntegrable(const std::string& m) : std::runtime_error("NonIntegrable: " + m) {}
};
struct Unsupported : std::runtime_error {
  explicit Unsupported(const std::string& m) : std::runtime_error("Unsupported: " + m) {}
};
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error("ParseError: " + m) {}
};

// Parses "p", "-p" or "p/q". Used everywhere rationals cross a file boundary.
Rat parse_rat(const std::string& s);

// Renders as "p" or "p/q", never a float.
std::string rat_str(const Rat& r);

// r^e for integer e (negative allowed when r != 0).
Rat rat_pow(const Rat& r, long e);

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Floor of a rational as an integer.
Int rat_floor(const Rat& r);

}  // namespace motivic

#endif
