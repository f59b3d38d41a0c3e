#pragma once

#include <cmath>
#include <type_traits>

namespace bifluid {

/// Forward-mode dual number a + b·δ with δ² = 0. Nesting `Dual<Dual<double>>`
/// yields exact second derivatives.
template <class T>
struct Dual {
    T val{};
    T eps{};

    constexpr Dual() = default;
    constexpr Dual(double v) : val(v), eps(0.0) {}  // NOLINT: implicit lift of constants
    constexpr Dual(T v, T e) : val(v), eps(e) {}

    Dual& operator+=(const Dual& o) { val += o.val; eps += o.eps; return *this; }
    Dual& operator-=(const Dual& o) { val -= o.val; eps -= o.eps; return *this; }
    Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
    Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

    friend Dual operator+(const Dual& a, const Dual& b) { return {a.val + b.val, a.eps + b.eps}; }
    friend Dual operator-(const Dual& a, const Dual& b) { return {a.val - b.val, a.eps - b.eps}; }
    friend Dual operator-(const Dual& a) { return {-a.val, -a.eps}; }
    friend Dual operator*(const Dual& a, const Dual& b) { return {a.val * b.val, a.val * b.eps + a.eps * b.val}; }
    friend Dual operator/(const Dual& a, const Dual& b)
    {
        return {a.val / b.val, (a.eps * b.val - a.val * b.eps) / (b.val * b.val)};
    }
    friend bool operator<(const Dual& a, const Dual& b) { return a.val < b.val; }
    friend bool operator>(const Dual& a, const Dual& b) { return a.val > b.val; }
    friend bool operator<=(const Dual& a, const Dual& b) { return a.val <= b.val; }
    friend bool operator>=(const Dual& a, const Dual& b) { return a.val >= b.val; }
    friend bool operator==(const Dual& a, const Dual& b) { return a.val == b.val; }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

/// Plain value of a possibly nested dual.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.val); }

template <class T>
Dual<T> exp(const Dual<T>& a)
{
    using std::exp;
    T e = exp(a.val);
    return {e, a.eps * e};
}

template <class T>
Dual<T> log(const Dual<T>& a)
{
    using std::log;
    return {log(a.val), a.eps / a.val};
}

template <class T>
Dual<T> sqrt(const Dual<T>& a)
{
    using std::sqrt;
    T s = sqrt(a.val);
    return {s, a.eps / (2.0 * s)};
}

template <class T>
Dual<T> sin(const Dual<T>& a)
{
    using std::cos;
    using std::sin;
    return {sin(a.val), a.eps * cos(a.val)};
}

template <class T>
Dual<T> cos(const Dual<T>& a)
{
    using std::cos;
    using std::sin;
    return {cos(a.val), -(a.eps * sin(a.val))};
}

template <class T>
Dual<T> tanh(const Dual<T>& a)
{
    using std::tanh;
    T t = tanh(a.val);
    return {t, a.eps * (1.0 - t * t)};
}

template <class T>
Dual<T> abs(const Dual<T>& a)
{
    return value_of(a) < 0.0 ? -a : a;
}

template <class T>
Dual<T> pow(const Dual<T>& a, double p)
{
    using std::pow;
    if (p == 0.0) return Dual<T>(1.0);
    // d/da a^p = p a^{p-1}; evaluate without dividing by a so a = 0 stays finite for p >= 1
    return {pow(a.val, p), a.eps * (p * pow(a.val, p - 1.0))};
}

inline bool is_constant(double) { return true; }
inline bool all_zero(double x) { return x == 0.0; }
template <class T>
bool all_zero(const Dual<T>& x) { return all_zero(x.val) && all_zero(x.eps); }
/// True when no derivative component is set (a lifted constant).
template <class T>
bool is_constant(const Dual<T>& x) { return all_zero(x.eps) && is_constant(x.val); }

template <class T>
Dual<T> pow(const Dual<T>& a, const Dual<T>& p)
{
    if (is_constant(p)) return pow(a, value_of(p));
    return exp(p * log(a));
}

template <class T>
Dual<T> pow(double a, const Dual<T>& p)
{
    using std::log;
    return exp(p * log(a));
}

} // namespace bifluid
