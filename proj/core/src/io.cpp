#include "causalq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace causalq {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json spaces_to_json(const std::vector<SpaceLabel>& spaces) {
    json arr = json::array();
    for (const auto& s : spaces) arr.push_back({{"name", s.name}, {"dim", s.dim}});
    return arr;
}

std::vector<SpaceLabel> spaces_from_json(const json& arr) {
    std::vector<SpaceLabel> out;
    for (const auto& s : arr) {
        SpaceLabel lab{s.at("name").get<std::string>(), s.at("dim").get<std::size_t>()};
        if (lab.dim == 0) throw std::invalid_argument("space '" + lab.name + "' has dim 0");
        out.push_back(std::move(lab));
    }
    return out;
}

json matrix_to_obj(const ComplexMatrix& m, const std::vector<SpaceLabel>& spaces) {
    json obj;
    obj["rows"] = m.rows();
    obj["cols"] = m.cols();
    json data = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const Cx v = m.at(r, c);
            data.push_back({v.real(), v.imag()});
        }
    }
    obj["data"] = std::move(data);
    obj["spaces"] = spaces_to_json(spaces);
    return obj;
}

ComplexMatrix matrix_from_obj(const json& obj, std::vector<SpaceLabel>* spaces) {
    const std::size_t rows = obj.at("rows").get<std::size_t>();
    const std::size_t cols = obj.at("cols").get<std::size_t>();
    const json& data = obj.at("data");
    if (!data.is_array() || data.size() != rows * cols) {
        throw std::invalid_argument("matrix data length does not match rows*cols");
    }
    std::vector<Cx> values;
    values.reserve(rows * cols);
    for (const json& entry : data) {
        if (!entry.is_array() || entry.size() != 2) {
            throw std::invalid_argument("matrix entries must be [re, im] pairs");
        }
        values.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    // The data-taking constructor rejects non-finite entries.
    ComplexMatrix m(rows, cols, std::move(values));
    if (spaces && obj.contains("spaces")) *spaces = spaces_from_json(obj["spaces"]);
    return m;
}

json parse(const std::string& text) {
    json obj = json::parse(text, nullptr, false);
    if (obj.is_discarded()) throw std::invalid_argument("malformed JSON");
    return obj;
}

std::string dump(const json& obj) { return obj.dump(2) + "\n"; }

json provenance_to_json(const Provenance& p) {
    return {{"seed", p.seed}, {"shots", p.shots}, {"noise", p.noise},
            {"version", kToolVersion}};
}

json roles_to_json(const BitRoles& roles) {
    json obj = json::object();
    if (roles.control) obj["control"] = *roles.control;
    if (roles.target) obj["target"] = *roles.target;
    return obj;
}

BitRoles roles_from_json(const json& obj) {
    BitRoles roles;
    if (obj.contains("control")) roles.control = obj["control"].get<std::size_t>();
    if (obj.contains("target")) roles.target = obj["target"].get<std::size_t>();
    return roles;
}

std::string csv_provenance(const Provenance& p) {
    std::string out;
    out += std::string("# causalq ") + kToolVersion + "\n";
    out += "# seed=" + std::to_string(p.seed) + "\n";
    out += "# shots=" + std::to_string(p.shots) + "\n";
    out += "# noise=" + p.noise + "\n";
    return out;
}

json choi_to_obj(const ChoiOperator& j) {
    json obj = matrix_to_obj(j.matrix, {j.in_space, j.out_space});
    obj["kind"] = j.kind == ChoiKind::Effect ? "effect" : "cptp";
    return obj;
}

ChoiOperator choi_from_obj(const json& obj) {
    std::vector<SpaceLabel> spaces;
    ComplexMatrix m = matrix_from_obj(obj, &spaces);
    if (spaces.size() != 2) {
        throw std::invalid_argument("a channel needs exactly two spaces (input, output)");
    }
    ChoiOperator j;
    j.matrix = std::move(m);
    j.in_space = spaces[0];
    j.out_space = spaces[1];
    const std::string kind = obj.value("kind", "cptp");
    if (kind == "cptp") {
        j.kind = ChoiKind::Cptp;
    } else if (kind == "effect") {
        j.kind = ChoiKind::Effect;
    } else {
        throw std::invalid_argument("unknown channel kind '" + kind + "'");
    }
    if (j.matrix.rows() != j.in_space.dim * j.out_space.dim) {
        throw std::invalid_argument("channel matrix size does not match its spaces");
    }
    return j;
}

const char* generator_name(GeneratorKind g) {
    return g == GeneratorKind::Switch ? "switch" : "fixed-order";
}
const char* order_name(PartyOrder o) {
    return o == PartyOrder::AThenB ? "a-then-b" : "b-then-a";
}
const char* locus_name(MeasurementLocus l) {
    return l == MeasurementLocus::TerminalFuture ? "terminal-future" : "party-b-output";
}

}  // namespace

std::string matrix_to_json(const ComplexMatrix& m, const std::vector<SpaceLabel>& spaces) {
    return dump(matrix_to_obj(m, spaces));
}

ComplexMatrix matrix_from_json(const std::string& text, std::vector<SpaceLabel>* spaces) {
    return matrix_from_obj(parse(text), spaces);
}

std::string choi_to_json(const ChoiOperator& j) { return dump(choi_to_obj(j)); }

ChoiOperator choi_from_json(const std::string& text) { return choi_from_obj(parse(text)); }

std::string instrument_to_json(const Instrument& instr) {
    json obj;
    obj["kind"] = "instrument";
    obj["spaces"] = spaces_to_json({instr.space});
    json povm = json::array();
    for (const auto& m : instr.povm) povm.push_back(matrix_to_obj(m, {}));
    json outputs = json::array();
    for (const auto& m : instr.outputs) outputs.push_back(matrix_to_obj(m, {}));
    obj["povm"] = std::move(povm);
    obj["outputs"] = std::move(outputs);
    return dump(obj);
}

Instrument instrument_from_json(const std::string& text) {
    const json obj = parse(text);
    if (obj.value("kind", "") != "instrument") {
        throw std::invalid_argument("expected kind 'instrument'");
    }
    const auto spaces = spaces_from_json(obj.at("spaces"));
    if (spaces.size() != 1) throw std::invalid_argument("an instrument has one space label");
    Instrument instr;
    instr.space = spaces[0];
    for (const auto& m : obj.at("povm")) instr.povm.push_back(matrix_from_obj(m, nullptr));
    for (const auto& m : obj.at("outputs")) {
        instr.outputs.push_back(matrix_from_obj(m, nullptr));
    }
    validate_instrument(instr);
    return instr;
}

std::string process_to_json(const ProcessMatrix& w) {
    return dump(matrix_to_obj(w.matrix, w.spaces));
}

ProcessMatrix process_from_json(const std::string& text) {
    ProcessMatrix w;
    w.matrix = matrix_from_obj(parse(text), &w.spaces);
    if (w.spaces.empty()) throw std::invalid_argument("a process needs its space labels");
    if (w.matrix.rows() != total_dim(w.spaces)) {
        throw std::invalid_argument("process matrix size does not match its spaces");
    }
    return w;
}

std::string distribution_to_json(const OutcomeDistribution& d, const Provenance& p) {
    json obj;
    obj["labels"] = d.labels;
    obj["probs"] = d.probs;
    obj["bit_roles"] = roles_to_json(d.roles);
    obj["shots"] = p.shots;
    obj["seed"] = p.seed;
    obj["provenance"] = provenance_to_json(p);
    return dump(obj);
}

OutcomeDistribution distribution_from_json(const std::string& text) {
    const json obj = parse(text);
    OutcomeDistribution d;
    d.labels = obj.at("labels").get<std::vector<std::string>>();
    d.probs = obj.at("probs").get<std::vector<double>>();
    if (obj.contains("bit_roles")) d.roles = roles_from_json(obj["bit_roles"]);
    if (d.labels.size() != d.probs.size()) {
        throw std::invalid_argument("labels and probs differ in length");
    }
    return d;
}

std::string counts_to_json(const OutcomeCounts& k, const Provenance& p) {
    json obj;
    obj["labels"] = k.labels;
    obj["counts"] = k.counts;
    obj["bit_roles"] = roles_to_json(k.roles);
    obj["shots"] = k.shots;
    obj["seed"] = k.seed;
    obj["provenance"] = provenance_to_json(p);
    return dump(obj);
}

OutcomeCounts counts_from_json(const std::string& text) {
    const json obj = parse(text);
    OutcomeCounts k;
    k.labels = obj.at("labels").get<std::vector<std::string>>();
    k.counts = obj.at("counts").get<std::vector<std::uint64_t>>();
    k.shots = obj.at("shots").get<std::uint64_t>();
    k.seed = obj.at("seed").get<std::uint64_t>();
    if (obj.contains("bit_roles")) k.roles = roles_from_json(obj["bit_roles"]);
    if (k.labels.size() != k.counts.size()) {
        throw std::invalid_argument("labels and counts differ in length");
    }
    return k;
}

std::string report_to_json(const DiagnosticReport& r, const Provenance& p) {
    if (r.checks.empty()) throw std::invalid_argument("report_to_json: report has no checks");
    json obj;
    obj["scenario"] = r.scenario;
    obj["classification"] = classification_name(r.classification);
    obj["eps"] = r.eps;
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"rule", "R" + std::to_string(c.rule)},
                          {"control", c.control},
                          {"quantity", c.quantity},
                          {"threshold", c.threshold},
                          {"verdict", verdict_name(c.verdict)},
                          {"detail", c.detail}});
    }
    obj["checks"] = std::move(checks);

    const auto entries_to_json = [](const std::vector<DeltaCdEntry>& entries) {
        json table = json::object();
        for (const auto& e : entries) {
            const std::string key = e.control.empty() ? "unconditioned" : e.control;
            if (e.defined) {
                table[key] = {{"aggregate", e.aggregate},
                              {"per_outcome", e.per_outcome}};
            } else {
                table[key] = {{"undefined", true}};
            }
        }
        return table;
    };
    json delta;
    delta["ideal"] = entries_to_json(r.delta_cd_ideal);
    if (!r.delta_cd_noisy.empty()) delta["noisy"] = entries_to_json(r.delta_cd_noisy);
    obj["delta_cd"] = std::move(delta);
    obj["provenance"] = provenance_to_json(p);
    return dump(obj);
}

std::string scenario_to_json(const CausalScenario& s) {
    json obj;
    obj["name"] = s.name;
    obj["generator"] = generator_name(s.generator);
    if (s.generator == GeneratorKind::FixedOrder) obj["order"] = order_name(s.order);
    if (s.has_control()) obj["control_prep"] = matrix_to_obj(s.control_prep, {});
    obj["target_prep"] = matrix_to_obj(s.target_prep, {});
    json ka = json::array();
    for (const auto& m : s.channel_a) ka.push_back(matrix_to_obj(m, {}));
    json kb = json::array();
    for (const auto& m : s.channel_b) kb.push_back(matrix_to_obj(m, {}));
    obj["channel_a"] = std::move(ka);
    obj["channel_b"] = std::move(kb);
    obj["observational"] = choi_to_obj(s.observational);
    obj["interventional"] = choi_to_obj(s.interventional);
    obj["declared"] = {{"a_to_b", s.declared.a_to_b},
                       {"a_parentless", s.declared.a_parentless}};
    obj["locus"] = locus_name(s.locus);
    return dump(obj);
}

CausalScenario scenario_from_json(const std::string& text) {
    const json obj = parse(text);
    CausalScenario s;
    s.name = obj.at("name").get<std::string>();

    const std::string gen = obj.at("generator").get<std::string>();
    if (gen == "switch") {
        s.generator = GeneratorKind::Switch;
    } else if (gen == "fixed-order") {
        s.generator = GeneratorKind::FixedOrder;
    } else {
        throw std::invalid_argument("unknown generator '" + gen + "'");
    }

    if (s.generator == GeneratorKind::FixedOrder) {
        const std::string order = obj.value("order", "a-then-b");
        if (order == "a-then-b") {
            s.order = PartyOrder::AThenB;
        } else if (order == "b-then-a") {
            s.order = PartyOrder::BThenA;
        } else {
            throw std::invalid_argument("unknown order '" + order + "'");
        }
    } else {
        s.control_prep = matrix_from_obj(obj.at("control_prep"), nullptr);
    }

    s.target_prep = matrix_from_obj(obj.at("target_prep"), nullptr);
    for (const auto& m : obj.at("channel_a")) {
        s.channel_a.push_back(matrix_from_obj(m, nullptr));
    }
    for (const auto& m : obj.at("channel_b")) {
        s.channel_b.push_back(matrix_from_obj(m, nullptr));
    }
    if (s.channel_a.empty() || s.channel_b.empty()) {
        throw std::invalid_argument("both party channels need at least one Kraus operator");
    }
    s.observational = choi_from_obj(obj.at("observational"));
    s.interventional = choi_from_obj(obj.at("interventional"));

    const json& declared = obj.at("declared");
    s.declared.a_to_b = declared.at("a_to_b").get<bool>();
    s.declared.a_parentless = declared.at("a_parentless").get<bool>();

    const std::string locus = obj.at("locus").get<std::string>();
    if (locus == "terminal-future") {
        s.locus = MeasurementLocus::TerminalFuture;
    } else if (locus == "party-b-output") {
        s.locus = MeasurementLocus::PartyBOutput;
    } else {
        throw std::invalid_argument("unknown locus '" + locus + "'");
    }
    return s;
}

std::string distribution_to_csv(const OutcomeDistribution& d, const Provenance& p) {
    std::string out = csv_provenance(p);
    out += "label,probability\n";
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
        out += d.labels[i] + "," + fmt_double(d.probs[i]) + "\n";
    }
    return out;
}

std::string counts_to_csv(const OutcomeCounts& k, const Provenance& p) {
    std::string out = csv_provenance(p);
    out += "label,count\n";
    for (std::size_t i = 0; i < k.labels.size(); ++i) {
        out += k.labels[i] + "," + std::to_string(k.counts[i]) + "\n";
    }
    return out;
}

std::string conditional_table_to_csv(const ConditionalTable& t, const Provenance& p) {
    std::string out = csv_provenance(p);
    out += "control,p_target0,p_target1\n";
    for (std::size_t c = 0; c < t.rows.size(); ++c) {
        if (!t.rows[c]) continue;
        out += std::to_string(c) + "," + fmt_double((*t.rows[c])[0]) + "," +
               fmt_double((*t.rows[c])[1]) + "\n";
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw std::runtime_error("error while reading '" + path + "'");
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

}  // namespace causalq
