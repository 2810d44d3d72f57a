#pragma once
// Brute-force classification of a point against every input curve.

#include "curveloc/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace curveloc {

enum class Sign : std::uint8_t { Inside, Outside, Above, Below, OutsideSpan, On };

const char* to_string(Sign s);

using SignVector = std::vector<Sign>;

/// Disks: inside/outside by distance to the center. Graphs and segments:
/// above/below inside their x-span, OutsideSpan elsewhere. On when the point
/// is within epsilon of the curve.
Sign classify(const Curve& curve, const Point& q, double epsilon);

/// One entry per curve, in input order.
SignVector sign_vector(const std::vector<Curve>& curves, const Point& q, double epsilon);

bool has_on_flag(const SignVector& v);

/// Compact text form, one character per curve (I, O, A, B, X, ~).
std::string format_signs(const SignVector& v);

struct NaiveResult {
    SignVector signs;
    long long predicates = 0;
};

/// Linear scan over all curves; `predicates` counts classify calls.
NaiveResult naive_locate(const std::vector<Curve>& curves, const Point& q, double epsilon);

}  // namespace curveloc
