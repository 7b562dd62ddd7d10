#ifndef LATMOVE_NUMERIC_HPP
#define LATMOVE_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "latmove/errors.hpp"

namespace latmove {

// All geometric predicates are decided over arbitrary-precision integers;
// rationals appear only where a construction genuinely needs them
// (barycentric solves, shear offsets, cell apexes).
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// A lattice point is an integer coordinate vector; its length is the ambient
// dimension of whatever context it lives in.
using Vec = std::vector<Int>;
using LatticePoint = Vec;

inline Int dot(const Vec& a, const Vec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec neg(const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline Vec scale(const Int& s, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

inline bool is_zero(const Vec& a) {
    for (const Int& x : a)
        if (x != 0) return false;
    return true;
}

inline Int vec_gcd(const Vec& a) {
    Int g = 0;
    for (const Int& x : a) g = boost::multiprecision::gcd(g, x);
    return g;
}

// Divides by the gcd of the entries; direction is preserved.
inline Vec make_primitive(Vec a) {
    Int g = vec_gcd(a);
    if (g > 1)
        for (Int& x : a) x /= g;
    return a;
}

inline Int rat_floor(const Rat& r) {
    Int n = boost::multiprecision::numerator(r);
    Int d = boost::multiprecision::denominator(r);
    Int q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

inline Int rat_ceil(const Rat& r) {
    Int n = boost::multiprecision::numerator(r);
    Int d = boost::multiprecision::denominator(r);
    Int q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return q;
}

inline std::string vec_to_string(const Vec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += v[i].str();
    }
    return s;
}

inline void require_same_dim(const std::vector<Vec>& pts) {
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].size() != pts[0].size())
            fail(ErrorCode::InvalidInput, "points of mixed dimensions");
}

}  // namespace latmove

#endif
