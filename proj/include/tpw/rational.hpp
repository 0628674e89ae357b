#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace tpw {

using BigInt = boost::multiprecision::cpp_int;
using Rat    = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rat& r) {
    return r.str();
}

} // namespace tpw
