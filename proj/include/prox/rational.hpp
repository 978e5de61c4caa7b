#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/traits/is_byte_container.hpp>
#include <type_traits>

// Eigen 3.4 expressions expose const_iterator = void, which breaks Boost 1.74's
// byte-container probe during Eigen's scalar-promotion SFINAE.
namespace boost::multiprecision::detail {
template <class C>
  requires std::is_void_v<typename C::const_iterator>
struct is_byte_container_imp<C, true> : boost::false_type {};
}  // namespace boost::multiprecision::detail

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <optional>
#include <string>
#include <string_view>

#include "prox/types.hpp"

namespace prox {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RatVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

// Accepts "p/q", integers and plain decimals ("-2.75", "1e-3").
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

double to_double(const Rational& q);
Vec to_double(const RatVec& v);
Mat to_double(const RatMat& m);

// Exact value of a binary double.
Rational exact_from_double(double x);
RatVec exact_from_double(const Vec& v);
RatMat exact_from_double(const Mat& m);

RatVec to_rational(const IntVec& v);
RatMat to_rational(const IntMat& m);

Integer floor_div(const Rational& q);
Integer ceil_div(const Rational& q);
Integer round_nearest(const Rational& q);

std::optional<Rational> sqrt_exact(const Rational& q);

// Gaussian elimination over the rationals.
int rank_exact(const RatMat& a);
std::optional<RatVec> solve_exact(const RatMat& a, const RatVec& b);
std::optional<RatMat> inverse_exact(const RatMat& a);
RatMat nullspace_exact(const RatMat& a);
Rational det_exact(const RatMat& a);

}  // namespace prox
