// common.hpp — small shared vocabulary: 2-vectors, error taxonomy, RNG, constants.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hbargeo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

// ---------------------------------------------------------------------------
// Plain 2-vector. Everything in the toolkit is 2D; a full linear-algebra
// dependency would be noise for 2x2 work.
// ---------------------------------------------------------------------------
struct Vec2 {
    double x{0.0}, y{0.0};

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    // 90-degree counterclockwise rotation (the "perp" of the cone equation).
    Vec2 perp() const { return {-y, x}; }
    Vec2 unit() const { double n = norm(); return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Symmetric 2x2 matrix (Hessians).
struct Sym2 {
    double xx{0.0}, xy{0.0}, yy{0.0};
    Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
    double quad(const Vec2& v) const { return v.dot(apply(v)); }
    double trace() const { return xx + yy; }
    double det() const { return xx * yy - xy * xy; }
};

// ---------------------------------------------------------------------------
// Error taxonomy. Every failure carries a stable short code; the CLI maps
// ConfigError -> exit 1 and SolverError -> exit 2.
// ---------------------------------------------------------------------------
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class SolverError : public Error {
  public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// splitmix64-based RNG. Fully specified arithmetic so that identical seeds
// give identical streams on any platform (determinism is contractual).
// ---------------------------------------------------------------------------
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

// Reduce a coordinate to [0,1). Used before every trig evaluation so that
// lattice-translated points produce bitwise-identical values (exact graph
// periodicity downstream).
inline double fract(double x) {
    double f = x - std::floor(x);
    return (f >= 1.0) ? 0.0 : f;  // guard x = -1e-17 -> f rounds to 1.0
}

}  // namespace hbargeo
