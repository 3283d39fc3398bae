#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalq/channels.hpp"
#include "causalq/diagnostics.hpp"
#include "causalq/process.hpp"
#include "causalq/sampling.hpp"
#include "causalq/scenarios.hpp"

namespace causalq {

inline constexpr const char* kToolVersion = "0.1.0";

// Run metadata embedded in every emitted table so a file is traceable to the
// exact configuration that produced it.  `noise` is free text ("ideal",
// "0.01,0.03", "depolarizing p=0.05", ...).
struct Provenance {
    std::uint64_t seed = 0;
    std::uint64_t shots = 0;
    std::string noise = "ideal";
};

// Matrices serialize as {"rows", "cols", "data": [[re, im], ...] row-major,
// "spaces": [{"name", "dim"}, ...]}.  Chois and instruments reuse the same
// layout with a "kind" discriminator; parsers reject malformed or
// non-finite input with std::invalid_argument.
std::string matrix_to_json(const ComplexMatrix& m,
                           const std::vector<SpaceLabel>& spaces = {});
ComplexMatrix matrix_from_json(const std::string& text,
                               std::vector<SpaceLabel>* spaces = nullptr);

std::string choi_to_json(const ChoiOperator& j);
ChoiOperator choi_from_json(const std::string& text);

std::string instrument_to_json(const Instrument& instr);
Instrument instrument_from_json(const std::string& text);

std::string process_to_json(const ProcessMatrix& w);
ProcessMatrix process_from_json(const std::string& text);

std::string distribution_to_json(const OutcomeDistribution& d, const Provenance& p);
OutcomeDistribution distribution_from_json(const std::string& text);

std::string counts_to_json(const OutcomeCounts& k, const Provenance& p);
OutcomeCounts counts_from_json(const std::string& text);

std::string report_to_json(const DiagnosticReport& r, const Provenance& p);

std::string scenario_to_json(const CausalScenario& s);
CausalScenario scenario_from_json(const std::string& text);

// CSV emitters: provenance rides as leading `#` comment lines, then a header
// row, then data rows with probabilities printed via "%.12g".
std::string distribution_to_csv(const OutcomeDistribution& d, const Provenance& p);
std::string counts_to_csv(const OutcomeCounts& k, const Provenance& p);
std::string conditional_table_to_csv(const ConditionalTable& t, const Provenance& p);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace causalq
