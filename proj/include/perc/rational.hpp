#ifndef PERC_RATIONAL_HPP
#define PERC_RATIONAL_HPP

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace perc {

// Exact rational with small denominator. Lattice coordinates are rationals
// such as 1/3 or 1/2; reflections and face walks must be exact, so no
// floating point here.
struct Frac {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Frac() = default;
    Frac(std::int64_t n) : num(n), den(1) {}
    Frac(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Frac: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    friend Frac operator+(Frac a, Frac b) { return Frac(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Frac operator-(Frac a, Frac b) { return Frac(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Frac operator*(Frac a, Frac b) { return Frac(a.num * b.num, a.den * b.den); }
    friend Frac operator/(Frac a, Frac b) { return Frac(a.num * b.den, a.den * b.num); }
    friend Frac operator-(Frac a) { return Frac(-a.num, a.den); }

    friend bool operator==(const Frac& a, const Frac& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Frac& a, const Frac& b) { return !(a == b); }
    friend bool operator<(const Frac& a, const Frac& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(const Frac& a, const Frac& b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(const Frac& a, const Frac& b) { return b < a; }
    friend bool operator>=(const Frac& a, const Frac& b) { return b <= a; }

    int sign() const { return num > 0 ? 1 : (num < 0 ? -1 : 0); }
    bool is_integer() const { return den == 1; }
    double to_double() const { return double(num) / double(den); }

    // floor of value
    std::int64_t floor() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }

    // representative in [0, m)
    Frac mod(std::int64_t m) const {
        std::int64_t fl = Frac(num, den * m).floor();
        return *this - Frac(m) * Frac(fl);
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// parse "a/b" or "a"
inline Frac parse_frac(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Frac(std::stoll(s));
    return Frac(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

struct Point {
    Frac x, y;
    Point() = default;
    Point(Frac px, Frac py) : x(px), y(py) {}
    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
    // row-major order: by (y, x)
    friend bool operator<(const Point& a, const Point& b) {
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    }
    std::string str() const { return "(" + x.str() + "," + y.str() + ")"; }
};

// z-component of cross product (q - p) x (r - p); exact sign
inline int orient(const Point& p, const Point& q, const Point& r) {
    Frac v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return v.sign();
}

struct Rect {
    Frac xlo, xhi, ylo, yhi;
    Rect() = default;
    Rect(Frac a, Frac b, Frac c, Frac d) : xlo(a), xhi(b), ylo(c), yhi(d) {}
    static Rect box(std::int64_t r) { return Rect(Frac(-r), Frac(r), Frac(-r), Frac(r)); }
    bool contains(const Point& p) const {
        return xlo <= p.x && p.x <= xhi && ylo <= p.y && p.y <= yhi;
    }
    Rect shifted(std::int64_t dx, std::int64_t dy) const {
        return Rect(xlo + Frac(dx), xhi + Frac(dx), ylo + Frac(dy), yhi + Frac(dy));
    }
};

struct PointHash {
    std::size_t operator()(const Point& p) const {
        std::size_t h = std::hash<std::int64_t>()(p.x.num);
        h ^= std::hash<std::int64_t>()(p.x.den) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= std::hash<std::int64_t>()(p.y.num) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= std::hash<std::int64_t>()(p.y.den) + 0x9e3779b9 + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace perc

#endif
