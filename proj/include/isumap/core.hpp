#ifndef ISUMAP_CORE_HPP
#define ISUMAP_CORE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace isumap {

// Extended reals: IEEE +infinity is the unreachable / no-edge sentinel.
// It is distinct from every finite value and natively satisfies the rules
// the distance algebra needs: inf + x = inf, min(inf, x) = x,
// exp(-inf) = 0 and -log(0) = inf.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(double x) { return std::isfinite(x); }

// Strength <-> length conversions used by the graph realization.
// Kept in one place so the zero/infinity cases never leak into sums.
inline double strength_of(double d) { return d == kInf ? 0.0 : std::exp(-d); }
inline double length_of(double s) { return s <= 0.0 ? kInf : -std::log(s); }

enum class Mode { UM, EPMet };

inline const char* mode_name(Mode m) { return m == Mode::UM ? "um" : "epmet"; }

struct InvalidParameter : std::invalid_argument {
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace isumap

#endif
