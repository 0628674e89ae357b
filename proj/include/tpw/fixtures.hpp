#pragma once
#include <string>
#include <vector>

#include "tpw/tensor.hpp"

namespace tpw {

/// Built-in verification models:
///   M1  n=2 constant symplectic plane, phi = 0
///   M2  n=3 linear so(3)* bracket, phi = 0
///   M3  n=4 nondegenerate twisted structure, pi^{34} = 1/(1+x1)
///   M4  n=4 constant pi with phi = dx1^dx2^dx3 (fails the twisted Jacobi identity)
Model make_fixture(const std::string& name);

std::vector<std::string> fixture_names();

} // namespace tpw
