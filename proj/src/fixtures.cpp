#include "ldsolv/fixtures.hpp"

#include "ldsolv/errors.hpp"

namespace ldsolv {

namespace {

// Three-point system of ranks (2, 1, 1); infinity is regular because the
// residues cancel identically in the parameters.
const char kSec4Example1[] = R"({
  "dimension": 3,
  "parameters": ["a", "b", "c"],
  "points": [
    {
      "location": [0, 0],
      "rank": 2,
      "coeffs": [
        [[-5, -4, -4], [17, 14, 13], [-10, -8, -7]],
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        [["2*a-c", "a-c", "a-c"],
         ["-3-6*a+5*c", "-2-3*a+5*c", "-2-3*a+5*c"],
         ["3+4*a-3*c", "2+2*a-3*c", "2+2*a-3*c"]]
      ]
    },
    {
      "location": [1, 0],
      "rank": 1,
      "coeffs": [
        [[-6, -5, -5], [23, 17, 15], [-14, -9, -7]],
        [[0, 0, 0], ["b+2", "-b+1", "-2*b+1"], ["-b-2", "b-1", "2*b-1"]]
      ]
    },
    {
      "location": [-1, 0],
      "rank": 1,
      "coeffs": [
        [[1, 1, 1], [-11, -7, -6], [8, 4, 3]],
        [["-2*a+c", "-a+c", "-a+c"],
         ["-b+6*a+1-5*c", "b+3*a+1-5*c", "2*b+3*a+1-5*c"],
         ["b-4*a-1+3*c", "-b-2*a-1+3*c", "-2*b-2*a-1+3*c"]]
      ]
    }
  ]
})";

// Three rank-1 points carrying only their leading terms, so every formal
// exponent vanishes and the verdict rides on triangularizability alone.
const char kSec4Example2[] = R"({
  "dimension": 3,
  "parameters": ["a", "b"],
  "points": [
    {
      "location": [0, 0],
      "rank": 1,
      "coeffs": [
        [[1, 0, 0], [0, -1, 0], [0, 0, 2]],
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
      ]
    },
    {
      "location": [1, 0],
      "rank": 1,
      "coeffs": [
        [[0, 0, 0], ["3*a", "3+b", 1], ["-3*a*b", "-b^2-5*b", "-2-b"]],
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
      ]
    },
    {
      "location": [-1, 0],
      "rank": 1,
      "coeffs": [
        [[-1, 0, 0], [0, 4, 0], [-2, 0, 1]],
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
      ]
    }
  ]
})";

// The sheared two-point form of u'' = (z^2 + c) u in the t = 1/z chart:
// an irregular rank-2 point at t = 0 and a Fuchsian point at infinity
// (the shearing is baked in; the point at infinity is given in its own
// local chart).
const char kSec2Example1[] = R"({
  "dimension": 2,
  "parameters": ["c"],
  "points": [
    {
      "location": [0, 0],
      "rank": 2,
      "coeffs": [
        [[0, -1], [-1, 0]],
        [[0, 0], [0, 0]],
        [[0, 0], ["-c", 1]]
      ]
    },
    {
      "location": "inf",
      "rank": 0,
      "coeffs": [
        [[0, 0], ["c", -1]]
      ]
    }
  ]
})";

}  // namespace

std::vector<std::string> fixture_names() {
    return {"sec2-example1", "sec4-example1", "sec4-example2"};
}

std::string fixture_document(const std::string& name) {
    if (name == "sec4-example1") return kSec4Example1;
    if (name == "sec4-example2") return kSec4Example2;
    if (name == "sec2-example1") return kSec2Example1;
    throw UnknownFixture(name);
}

}  // namespace ldsolv
