#pragma once

#include <string>

#include <json.hpp>

#include "cloneprob/feasibility.hpp"
#include "cloneprob/gram.hpp"
#include "cloneprob/symmetric.hpp"
#include "cloneprob/twostate.hpp"

namespace cloneprob::io {

using Json = nlohmann::json;

/// Thrown for structurally valid JSON that does not match a schema. The
/// message names the offending field path.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Complex numbers are always [re, im].
Json to_json(Complex c);
Complex complex_from_json(const Json& j, const std::string& path);

Json to_json(const CMatrix& m);
Json to_json(const StateSet& s);
Json to_json(const GramMatrix& g);
Json to_json(const MachineSpec& spec);
Json to_json(const FeasibilityReport& report);
Json to_json(const TwoStateProblem& problem);
Json to_json(const Optimum& opt);
Json to_json(const Decomposition& d);
Json to_json(const GapInstance& inst);
Json to_json(const GapCertificate& cert);
Json to_json(const LowerBound& lb);
Json to_json(const Lemma1Report& report);

StateSet state_set_from_json(const Json& j);
GramMatrix gram_from_json(const Json& j, const std::string& path = "gram");
/// flagGram is optional; absent means "search over flags".
MachineSpec machine_from_json(const Json& j, bool* hasFlags = nullptr);
TwoStateProblem two_state_from_json(const Json& j);
GapInstance gap_instance_from_json(const Json& j);

/// Serializes with every double printed to 17 significant digits.
std::string dump(const Json& j, int indent = 2);

/// Parses text, rethrowing parse failures as SchemaError with the byte
/// offset.
Json parse(const std::string& text, const std::string& source);

}  // namespace cloneprob::io
