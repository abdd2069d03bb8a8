#pragma once

#include "vosa/vosa.hpp"

#include "json.hpp"

#include <memory>
#include <string>
#include <vector>

namespace vosa {

using nlohmann::json;

// raised on malformed job specs; the CLI maps it to exit code 2
struct SpecError : std::runtime_error {
    SpecError(const std::string& w) : std::runtime_error(w) {}
};

json rational_json(const Rational& r);       // "p/q" string
json scalar_json(const Scalar& s);           // "a" or "a+b*i"
json weight_json(const Weight& w);
json mat_json(const Mat& m);

Rational rational_from_json(const json& j, const std::string& where);
Weight weight_from_json(const json& j, const std::string& where);
Mat rational_mat_from_json(const json& j, const std::string& where);

struct JobSpec {
    std::string construction; // ns | fermion | lattice | direct_sum | tensor
    json parameters;
    Weight cutoff{0};
    std::vector<std::string> checks;
    // optional conformal-comparison configuration
    std::string conformal_kind = "heisenberg"; // or "sugawara"
    Rational level = 0, dual_coxeter = 0;
};

// Parses and validates a full job spec (construction, cutoff, checks).
JobSpec parse_jobspec(const json& j);

// A built instance plus ownership of the components it references.
struct BuiltInstance {
    std::vector<std::unique_ptr<TruncatedVOSA>> owned;
    TruncatedVOSA* v = nullptr; // points into owned
};

// Builds the requested construction; throws SpecError on invalid parameters
// and CutoffExceeded when a construction needs data above the cutoff.
BuiltInstance build_instance(const std::string& construction, const json& parameters, Weight cutoff);

} // namespace vosa
