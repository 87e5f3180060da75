#include "qweft/serialize.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace qweft {

using nlohmann::json;

namespace {

json complex_to_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

cxd complex_from_json(const json& j) {
  return cxd(j.at(0).get<double>(), j.at(1).get<double>());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j.at(r).at(c));
  return m;
}

const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::kUnitary1: return "u1";
    case GateKind::kHat: return "hat";
    case GateKind::kSwap: return "swap";
    case GateKind::kFredkin: return "fredkin";
    case GateKind::kPhaseE: return "phase_e";
    case GateKind::kCnot: return "cnot";
    case GateKind::kToffoli: return "toffoli";
    case GateKind::kBigAnd: return "big_and";
    case GateKind::kFanout: return "fanout";
    case GateKind::kControlled: return "controlled";
    case GateKind::kProjPhase: return "proj_phase";
    case GateKind::kUnitary: return "unitary";
    case GateKind::kMeasure: return "measure";
  }
  return "?";
}

GateKind kind_from_name(const std::string& s) {
  if (s == "u1") return GateKind::kUnitary1;
  if (s == "hat") return GateKind::kHat;
  if (s == "swap") return GateKind::kSwap;
  if (s == "fredkin") return GateKind::kFredkin;
  if (s == "phase_e") return GateKind::kPhaseE;
  if (s == "cnot") return GateKind::kCnot;
  if (s == "toffoli") return GateKind::kToffoli;
  if (s == "big_and") return GateKind::kBigAnd;
  if (s == "fanout") return GateKind::kFanout;
  if (s == "controlled") return GateKind::kControlled;
  if (s == "proj_phase") return GateKind::kProjPhase;
  if (s == "unitary") return GateKind::kUnitary;
  if (s == "measure") return GateKind::kMeasure;
  throw std::invalid_argument("unknown gate kind: " + s);
}

json gate_to_json(const GateDescriptor& g) {
  json j;
  j["kind"] = kind_name(g.kind);
  j["wires"] = g.wires;
  switch (g.kind) {
    case GateKind::kUnitary1:
    case GateKind::kHat:
    case GateKind::kUnitary:
      j["matrix"] = matrix_to_json(g.matrix);
      break;
    case GateKind::kPhaseE:
      j["phase"] = g.phase;
      break;
    case GateKind::kProjPhase: {
      j["phase"] = g.phase;
      json p;
      p["wires"] = g.projector.wires;
      if (g.projector.is_pattern())
        p["pattern"] = g.projector.pattern;
      else
        p["matrix"] = matrix_to_json(g.projector.matrix);
      j["projector"] = std::move(p);
      break;
    }
    case GateKind::kControlled:
      j["polarities"] = g.polarities;
      j["inner"] = gate_to_json(*g.inner);
      break;
    case GateKind::kFanout:
      if (g.quantum_fanout) j["quantum"] = true;
      break;
    default:
      break;
  }
  return j;
}

GateDescriptor gate_from_json(const json& j) {
  GateDescriptor g;
  g.kind = kind_from_name(j.at("kind").get<std::string>());
  g.wires = j.at("wires").get<std::vector<int>>();
  if (j.contains("matrix")) g.matrix = matrix_from_json(j.at("matrix"));
  if (j.contains("phase")) g.phase = j.at("phase").get<double>();
  if (j.contains("projector")) {
    const json& p = j.at("projector");
    g.projector.wires = p.at("wires").get<std::vector<int>>();
    if (p.contains("pattern"))
      g.projector.pattern = p.at("pattern").get<std::vector<int>>();
    else
      g.projector.matrix = matrix_from_json(p.at("matrix"));
  }
  if (j.contains("polarities"))
    g.polarities = j.at("polarities").get<std::vector<int>>();
  if (j.contains("inner"))
    g.inner = std::make_shared<GateDescriptor>(gate_from_json(j.at("inner")));
  if (j.contains("quantum")) g.quantum_fanout = j.at("quantum").get<bool>();
  return g;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, true);
  return j;
}

void expect_kind(const json& j, const std::string& kind) {
  if (!j.contains("kind") || j.at("kind").get<std::string>() != kind)
    throw std::invalid_argument("expected document of kind " + kind);
}

}  // namespace

std::string circuit_to_json(const QuantumCircuit& c) {
  json j;
  j["kind"] = "circuit";
  j["n_witness"] = c.n_witness;
  j["n_ancilla"] = c.n_ancilla;
  j["ancilla_init"] = c.ancilla_init;
  json gs = json::array();
  for (const auto& g : c.gates) gs.push_back(gate_to_json(g));
  j["gates"] = std::move(gs);
  json acc = json::array();
  for (const auto& a : c.accept)
    acc.push_back(json{{"wire", a.wire}, {"value", a.value}});
  j["accept"] = std::move(acc);
  return j.dump(2);
}

QuantumCircuit circuit_from_json(const std::string& text) {
  json j = parse(text);
  expect_kind(j, "circuit");
  QuantumCircuit c;
  c.n_witness = j.at("n_witness").get<int>();
  c.n_ancilla = j.at("n_ancilla").get<int>();
  c.ancilla_init = j.at("ancilla_init").get<std::string>();
  for (const auto& gj : j.at("gates")) c.gates.push_back(gate_from_json(gj));
  for (const auto& aj : j.at("accept"))
    c.accept.push_back({aj.at("wire").get<int>(), aj.at("value").get<int>()});
  c.validate();
  return c;
}

std::string hamiltonian_to_json(const LocalHamiltonian& h) {
  json j;
  j["kind"] = "hamiltonian";
  j["n"] = h.n;
  j["locality"] = h.locality;
  if (h.clock_register)
    j["clock"] = std::vector<int>(h.clock_register->begin(),
                                  h.clock_register->end());
  if (h.thresholds)
    j["thresholds"] = json{{"a", h.thresholds->a}, {"b", h.thresholds->b}};
  json ts = json::array();
  for (const auto& t : h.terms)
    ts.push_back(json{{"support", t.support}, {"block", matrix_to_json(t.block)}});
  j["terms"] = std::move(ts);
  return j.dump(2);
}

LocalHamiltonian hamiltonian_from_json(const std::string& text) {
  json j = parse(text);
  expect_kind(j, "hamiltonian");
  LocalHamiltonian h;
  h.n = j.at("n").get<int>();
  h.locality = j.at("locality").get<int>();
  if (j.contains("clock")) {
    auto v = j.at("clock").get<std::vector<int>>();
    h.clock_register = std::set<int>(v.begin(), v.end());
  }
  if (j.contains("thresholds"))
    h.thresholds = Thresholds{j.at("thresholds").at("a").get<double>(),
                              j.at("thresholds").at("b").get<double>()};
  for (const auto& tj : j.at("terms"))
    h.terms.push_back(LocalTerm{tj.at("support").get<std::vector<int>>(),
                                matrix_from_json(tj.at("block"))});
  return h;
}

std::string graph_to_json(const Graph& g) {
  json j;
  j["kind"] = "graph";
  j["n"] = g.n;
  json es = json::array();
  for (auto [u, v] : g.edges) es.push_back(json::array({u, v}));
  j["edges"] = std::move(es);
  return j.dump(2);
}

Graph graph_from_json(const std::string& text) {
  json j = parse(text);
  expect_kind(j, "graph");
  Graph g;
  g.n = j.at("n").get<int>();
  for (const auto& e : j.at("edges"))
    g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  return g;
}

std::string classical_to_json(const ClassicalCircuit& c) {
  json j;
  j["kind"] = "classical_circuit";
  j["n_inputs"] = c.n_inputs;
  j["n_wires"] = c.n_wires;
  j["output_wire"] = c.output_wire;
  json gs = json::array();
  for (const auto& g : c.gates) {
    const char* names[] = {"not", "and", "or", "fanout"};
    gs.push_back(json{{"kind", names[g.kind]},
                      {"inputs", g.inputs},
                      {"outputs", g.outputs}});
  }
  j["gates"] = std::move(gs);
  return j.dump(2);
}

ClassicalCircuit classical_from_json(const std::string& text) {
  json j = parse(text);
  expect_kind(j, "classical_circuit");
  ClassicalCircuit c;
  c.n_inputs = j.at("n_inputs").get<int>();
  c.n_wires = j.at("n_wires").get<int>();
  c.output_wire = j.at("output_wire").get<int>();
  for (const auto& gj : j.at("gates")) {
    ClassicalGate g;
    const std::string s = gj.at("kind").get<std::string>();
    if (s == "not") g.kind = ClassicalGate::kNot;
    else if (s == "and") g.kind = ClassicalGate::kAnd;
    else if (s == "or") g.kind = ClassicalGate::kOr;
    else if (s == "fanout") g.kind = ClassicalGate::kFanout;
    else throw std::invalid_argument("unknown classical gate: " + s);
    g.inputs = gj.at("inputs").get<std::vector<int>>();
    g.outputs = gj.at("outputs").get<std::vector<int>>();
    c.gates.push_back(std::move(g));
  }
  return c;
}

std::string sector_state_to_json(const SectorState& s) {
  json j;
  j["kind"] = "state";
  j["form"] = "sector";
  j["n"] = s.indexer.n();
  j["k"] = s.indexer.k();
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i)
    amps.push_back(complex_to_json(s.amplitudes[i]));
  j["amplitudes"] = std::move(amps);
  return j.dump(2);
}

SectorState sector_state_from_json(const std::string& text) {
  json j = parse(text);
  expect_kind(j, "state");
  if (j.at("form").get<std::string>() != "sector")
    throw std::invalid_argument("expected a sector state");
  BasisIndexer idx(j.at("n").get<int>(), j.at("k").get<int>());
  Vector v(static_cast<Eigen::Index>(j.at("amplitudes").size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = complex_from_json(j.at("amplitudes").at(i));
  return SectorState(idx, std::move(v));
}

std::string full_state_to_json(const FullState& s) {
  json j;
  j["kind"] = "state";
  j["form"] = "full";
  j["n"] = s.n;
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i)
    amps.push_back(complex_to_json(s.amplitudes[i]));
  j["amplitudes"] = std::move(amps);
  return j.dump(2);
}

FullState full_state_from_json(const std::string& text) {
  json j = parse(text);
  expect_kind(j, "state");
  if (j.at("form").get<std::string>() != "full")
    throw std::invalid_argument("expected a full state");
  const int n = j.at("n").get<int>();
  Vector v(static_cast<Eigen::Index>(j.at("amplitudes").size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = complex_from_json(j.at("amplitudes").at(i));
  return FullState(n, std::move(v));
}

std::string report_to_json(const VerificationReport& r) {
  json j;
  j["kind"] = "report";
  j["instance_id"] = r.instance_id;
  j["step"] = r.step;
  j["pass"] = r.pass;
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json{{"name", row.name},
                        {"expected", row.expected},
                        {"observed", row.observed},
                        {"residual", row.residual},
                        {"tol", row.tol},
                        {"pass", row.pass}});
  j["rows"] = std::move(rows);
  return j.dump(2);
}

VerificationReport report_from_json(const std::string& text) {
  json j = parse(text);
  expect_kind(j, "report");
  VerificationReport r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.step = j.at("step").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  for (const auto& rj : j.at("rows")) {
    CheckRow row;
    row.name = rj.at("name").get<std::string>();
    row.expected = rj.at("expected").get<double>();
    row.observed = rj.at("observed").get<double>();
    row.residual = rj.at("residual").get<double>();
    row.tol = rj.at("tol").get<double>();
    row.pass = rj.at("pass").get<bool>();
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::string artifact_to_json(const ReductionArtifact& a) {
  json j;
  j["kind"] = "artifact";
  j["step"] = a.step;
  j["k_in"] = a.k_in;
  j["k_out"] = a.k_out;
  if (a.circuit) j["circuit"] = json::parse(circuit_to_json(*a.circuit));
  if (a.hamiltonian)
    j["hamiltonian"] = json::parse(hamiltonian_to_json(*a.hamiltonian));
  if (a.energy_thresholds)
    j["energy_thresholds"] =
        json{{"a", a.energy_thresholds->a}, {"b", a.energy_thresholds->b}};
  if (a.prob_thresholds)
    j["prob_thresholds"] =
        json{{"c", a.prob_thresholds->first}, {"s", a.prob_thresholds->second}};
  if (a.phases) {
    j["phases"] = a.phases->phases;
    j["phases_m"] = a.phases->m;
  }
  j["metadata"] = a.metadata;
  return j.dump(2);
}

ReductionArtifact artifact_from_json(const std::string& text) {
  json j = parse(text);
  expect_kind(j, "artifact");
  ReductionArtifact a;
  a.step = j.at("step").get<std::string>();
  a.k_in = j.at("k_in").get<int>();
  a.k_out = j.at("k_out").get<int>();
  if (j.contains("circuit"))
    a.circuit = circuit_from_json(j.at("circuit").dump());
  if (j.contains("hamiltonian"))
    a.hamiltonian = hamiltonian_from_json(j.at("hamiltonian").dump());
  if (j.contains("energy_thresholds"))
    a.energy_thresholds =
        Thresholds{j.at("energy_thresholds").at("a").get<double>(),
                   j.at("energy_thresholds").at("b").get<double>()};
  if (j.contains("prob_thresholds"))
    a.prob_thresholds = {j.at("prob_thresholds").at("c").get<double>(),
                         j.at("prob_thresholds").at("s").get<double>()};
  if (j.contains("phases")) {
    PhaseSequence ps;
    ps.phases = j.at("phases").get<std::vector<double>>();
    ps.m = j.at("phases_m").get<int>();
    a.phases = std::move(ps);
  }
  if (j.contains("metadata"))
    a.metadata = j.at("metadata").get<std::map<std::string, double>>();
  return a;
}

std::string kind_of_json(const std::string& text) {
  json j = parse(text);
  if (!j.contains("kind")) throw std::invalid_argument("document has no kind");
  return j.at("kind").get<std::string>();
}

std::string circuit_to_dot(const QuantumCircuit& c) {
  std::ostringstream os;
  os << "digraph circuit {\n  rankdir=LR;\n";
  std::vector<std::string> last(c.n_total());
  for (int w = 0; w < c.n_total(); ++w) {
    os << "  in" << w << " [shape=plaintext,label=\"q" << w << "\"];\n";
    last[w] = "in" + std::to_string(w);
  }
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const auto& g = c.gates[gi];
    const std::string node = "g" + std::to_string(gi);
    os << "  " << node << " [shape=box,label=\"" << kind_name(g.kind) << "\"];\n";
    for (int w : g.all_wires()) {
      os << "  " << last[w] << " -> " << node << " [label=\"q" << w << "\"];\n";
      last[w] = node;
    }
  }
  for (std::size_t ai = 0; ai < c.accept.size(); ++ai) {
    const auto& a = c.accept[ai];
    os << "  acc" << ai << " [shape=doublecircle,label=\"=" << a.value
       << "\"];\n";
    os << "  " << last[a.wire] << " -> acc" << ai << " [label=\"q" << a.wire
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << content;
}

}  // namespace qweft
