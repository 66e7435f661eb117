#ifndef ISUMAP_TCONORM_HPP
#define ISUMAP_TCONORM_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "isumap/core.hpp"

namespace isumap {

// Binary operation on [0,1]: commutative, associative, monotone, with
// identity 0 (and therefore annihilator 1). Builtins dispatch directly;
// custom operations pass a randomized axiom audit at registration.
class TConorm {
  public:
    enum class Kind { Max, ProbSum, BoundedSum, Custom };

    static TConorm max_conorm() { return TConorm(Kind::Max, "max"); }
    static TConorm probabilistic_sum() { return TConorm(Kind::ProbSum, "probsum"); }
    static TConorm bounded_sum() { return TConorm(Kind::BoundedSum, "bsum"); }

    static TConorm custom(std::function<double(double, double)> fn,
                          const std::string& name = "custom") {
        TConorm t(Kind::Custom, name);
        t.fn_ = std::move(fn);
        t.audit();
        return t;
    }

    double operator()(double a, double b) const {
        if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
            throw InvalidInput("t-conorm argument outside [0,1]");
        // identity and annihilator are forced for every t-conorm; keeping
        // them exact at the boundary avoids rounding like a+1-a*1 != 1
        if (b == 0.0) return a;
        if (a == 0.0) return b;
        if (a == 1.0 || b == 1.0) return 1.0;
        switch (kind_) {
            case Kind::Max: return std::max(a, b);
            case Kind::ProbSum: return a + b - a * b;
            case Kind::BoundedSum: return std::min(1.0, a + b);
            case Kind::Custom: return fn_(a, b);
        }
        return 0.0;
    }

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }

  private:
    TConorm(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    // 10^3 random triples, tolerance 1e-9; boundary values mixed in.
    void audit() const {
        std::mt19937_64 rng(0x7c010a5u);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double tol = 1e-9;
        auto fail = [](const char* what) {
            throw InvalidParameter(std::string("custom t-conorm rejected: ") + what);
        };
        for (int rep = 0; rep < 1000; ++rep) {
            double a = rep % 7 == 0 ? (rep % 2) : unif(rng);
            double b = rep % 11 == 0 ? 1.0 : unif(rng);
            double c = unif(rng);
            double ab = fn_(a, b);
            if (!(ab >= -tol && ab <= 1.0 + tol)) fail("range");
            if (std::abs(ab - fn_(b, a)) > tol) fail("commutativity");
            if (std::abs(fn_(a, fn_(b, c)) - fn_(ab, c)) > tol) fail("associativity");
            if (std::abs(fn_(a, 0.0) - a) > tol) fail("identity at 0");
            if (std::abs(fn_(a, 1.0) - 1.0) > tol) fail("annihilator at 1");
            double a2 = a + (1.0 - a) * unif(rng);
            double b2 = b + (1.0 - b) * unif(rng);
            if (fn_(a2, b2) < ab - tol) fail("monotonicity");
        }
    }

    Kind kind_;
    std::string name_;
    std::function<double(double, double)> fn_;
};

}  // namespace isumap

#endif
