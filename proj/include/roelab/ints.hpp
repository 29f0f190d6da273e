// Exact integer scalars for the linear-algebra core.
//
// The elimination kernels run on int64 with checked arithmetic and escalate
// to arbitrary precision (boost cpp_int) when a computation overflows.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace roelab {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by the int64 arithmetic layer; callers rerun with BigInt.
struct OverflowEscalation : std::exception {
    const char* what() const noexcept override { return "int64 overflow, escalate to BigInt"; }
};

struct CheckedI64 {
    std::int64_t v = 0;
    CheckedI64() = default;
    CheckedI64(std::int64_t x) : v(x) {}

    friend CheckedI64 operator+(CheckedI64 a, CheckedI64 b) {
        std::int64_t r;
        if (__builtin_add_overflow(a.v, b.v, &r)) throw OverflowEscalation{};
        return r;
    }
    friend CheckedI64 operator-(CheckedI64 a, CheckedI64 b) {
        std::int64_t r;
        if (__builtin_sub_overflow(a.v, b.v, &r)) throw OverflowEscalation{};
        return r;
    }
    friend CheckedI64 operator*(CheckedI64 a, CheckedI64 b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a.v, b.v, &r)) throw OverflowEscalation{};
        return r;
    }
    friend CheckedI64 operator/(CheckedI64 a, CheckedI64 b) {
        if (b.v == 0) throw Error("division by zero");
        if (a.v == INT64_MIN && b.v == -1) throw OverflowEscalation{};
        return a.v / b.v;
    }
    friend CheckedI64 operator%(CheckedI64 a, CheckedI64 b) {
        if (b.v == 0) throw Error("modulo by zero");
        if (a.v == INT64_MIN && b.v == -1) throw OverflowEscalation{};
        return a.v % b.v;
    }
    CheckedI64 operator-() const {
        if (v == INT64_MIN) throw OverflowEscalation{};
        return -v;
    }
    CheckedI64& operator+=(CheckedI64 b) { return *this = *this + b; }
    CheckedI64& operator-=(CheckedI64 b) { return *this = *this - b; }
    CheckedI64& operator*=(CheckedI64 b) { return *this = *this * b; }
    friend bool operator==(CheckedI64 a, CheckedI64 b) { return a.v == b.v; }
    friend bool operator!=(CheckedI64 a, CheckedI64 b) { return a.v != b.v; }
    friend bool operator<(CheckedI64 a, CheckedI64 b) { return a.v < b.v; }
    friend bool operator<=(CheckedI64 a, CheckedI64 b) { return a.v <= b.v; }
    friend bool operator>(CheckedI64 a, CheckedI64 b) { return a.v > b.v; }
    friend bool operator>=(CheckedI64 a, CheckedI64 b) { return a.v >= b.v; }
};

inline CheckedI64 abs(CheckedI64 a) { return a.v < 0 ? -a : a; }
using boost::multiprecision::abs;

inline bool is_zero(const CheckedI64& a) { return a.v == 0; }
inline bool is_zero(const BigInt& a) { return a.is_zero(); }
inline bool is_one(const CheckedI64& a) { return a.v == 1; }
inline bool is_one(const BigInt& a) { return a == 1; }
inline bool is_unit(const CheckedI64& a) { return a.v == 1 || a.v == -1; }
inline bool is_unit(const BigInt& a) { return a == 1 || a == -1; }

inline BigInt to_big(const CheckedI64& a) { return BigInt(a.v); }
inline BigInt to_big(const BigInt& a) { return a; }

template <class T>
T from_big(const BigInt& a);
template <>
inline BigInt from_big<BigInt>(const BigInt& a) {
    return a;
}
template <>
inline CheckedI64 from_big<CheckedI64>(const BigInt& a) {
    if (a > INT64_MAX || a < INT64_MIN) throw OverflowEscalation{};
    return CheckedI64((std::int64_t)a);
}

inline std::string to_string(const CheckedI64& a) { return std::to_string(a.v); }
inline std::string to_string(const BigInt& a) { return a.str(); }

} // namespace roelab
