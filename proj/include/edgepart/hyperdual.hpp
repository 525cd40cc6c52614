#pragma once

// Second-order forward-mode scalar: v + a e1 + b e2 + ab e1 e2 with e1^2 = e2^2 = 0.
// Seeding x_i.a = 1 and x_j.b = 1 yields df/dx_i in .a, df/dx_j in .b and
// d2f/dx_i dx_j in .ab, exact to rounding.

namespace edgepart {

struct HyperDual {
    double v = 0.0;
    double a = 0.0;
    double b = 0.0;
    double ab = 0.0;

    constexpr HyperDual() = default;
    constexpr HyperDual(double value) : v(value) {} // NOLINT(google-explicit-constructor)
    constexpr HyperDual(double value, double da, double db, double dab)
        : v(value), a(da), b(db), ab(dab) {}
};

constexpr double value_of(double x) { return x; }
constexpr double value_of(const HyperDual& x) { return x.v; }

constexpr HyperDual operator-(const HyperDual& x) { return {-x.v, -x.a, -x.b, -x.ab}; }

constexpr HyperDual operator+(const HyperDual& x, const HyperDual& y)
{
    return {x.v + y.v, x.a + y.a, x.b + y.b, x.ab + y.ab};
}

constexpr HyperDual operator-(const HyperDual& x, const HyperDual& y)
{
    return {x.v - y.v, x.a - y.a, x.b - y.b, x.ab - y.ab};
}

constexpr HyperDual operator*(const HyperDual& x, const HyperDual& y)
{
    return {x.v * y.v, x.v * y.a + x.a * y.v, x.v * y.b + x.b * y.v,
            x.v * y.ab + x.a * y.b + x.b * y.a + x.ab * y.v};
}

constexpr HyperDual inverse(const HyperDual& x)
{
    const double f = 1.0 / x.v;
    const double d1 = -f * f;
    const double d2 = 2.0 * f * f * f;
    return {f, d1 * x.a, d1 * x.b, d1 * x.ab + d2 * x.a * x.b};
}

constexpr HyperDual operator/(const HyperDual& x, const HyperDual& y) { return x * inverse(y); }

constexpr HyperDual operator*(const HyperDual& x, double s) { return {x.v * s, x.a * s, x.b * s, x.ab * s}; }
constexpr HyperDual operator*(double s, const HyperDual& x) { return x * s; }
constexpr HyperDual operator/(const HyperDual& x, double s) { return x * (1.0 / s); }
constexpr HyperDual operator/(double s, const HyperDual& x) { return inverse(x) * s; }
constexpr HyperDual operator+(const HyperDual& x, double s) { return {x.v + s, x.a, x.b, x.ab}; }
constexpr HyperDual operator+(double s, const HyperDual& x) { return x + s; }
constexpr HyperDual operator-(const HyperDual& x, double s) { return {x.v - s, x.a, x.b, x.ab}; }
constexpr HyperDual operator-(double s, const HyperDual& x) { return {s - x.v, -x.a, -x.b, -x.ab}; }

} // namespace edgepart
