#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "qweft/serialize.hpp"
#include "qweft/wpcompile.hpp"

using namespace qweft;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitGuardRefusal = 3;

struct PipelineValue {
  std::optional<Graph> graph;
  std::optional<LocalHamiltonian> hamiltonian;
  std::optional<QuantumCircuit> circuit;
  std::optional<ClassicalCircuit> classical;
  std::optional<Thresholds> energy_thresholds;
  std::optional<std::pair<double, double>> prob_thresholds;
  int k = 0;
};

PipelineValue load_value(const std::string& path) {
  PipelineValue v;
  const std::string text = read_file(path);
  const std::string kind = kind_of_json(text);
  if (kind == "graph")
    v.graph = graph_from_json(text);
  else if (kind == "hamiltonian") {
    v.hamiltonian = hamiltonian_from_json(text);
    v.energy_thresholds = v.hamiltonian->thresholds;
  } else if (kind == "circuit")
    v.circuit = circuit_from_json(text);
  else if (kind == "classical_circuit")
    v.classical = classical_from_json(text);
  else
    throw std::invalid_argument("unsupported input kind: " + kind);
  return v;
}

SourceInstance to_source(const PipelineValue& v) {
  SourceInstance s;
  s.graph = v.graph;
  s.hamiltonian = v.hamiltonian;
  s.circuit = v.circuit;
  s.classical = v.classical;
  s.energy_thresholds = v.energy_thresholds;
  s.prob_thresholds = v.prob_thresholds;
  return s;
}

struct StepParams {
  int k = -1;
  double epsilon = 0.1;
  double a = 0.0, b = 1.0;
  double c = 1.0, s = 0.0;
  int n_enc = 4;
  bool have_ab = false, have_cs = false;
};

ReductionArtifact run_step(const std::string& step, PipelineValue& value,
                           const StepParams& p) {
  if (step == "indset") {
    if (!value.graph) throw std::invalid_argument("indset expects a graph");
    return indset_to_wlh(*value.graph, p.k);
  }
  if (step == "wlh2wpcsat") {
    if (!value.hamiltonian)
      throw std::invalid_argument("wlh2wpcsat expects a hamiltonian");
    double a = p.a, b = p.b;
    if (!p.have_ab && value.energy_thresholds) {
      a = value.energy_thresholds->a;
      b = value.energy_thresholds->b;
    }
    return wlh_to_wpcsat(*value.hamiltonian, p.k, a, b);
  }
  if (step == "amplify") {
    if (!value.circuit) throw std::invalid_argument("amplify expects a circuit");
    double c = p.c, s = p.s;
    if (!p.have_cs && value.prob_thresholds) {
      c = value.prob_thresholds->first;
      s = value.prob_thresholds->second;
    }
    return qsvt_amplify(*value.circuit, p.k, c, s, p.epsilon);
  }
  if (step == "grid") {
    if (!value.circuit) throw std::invalid_argument("grid expects a circuit");
    ReductionArtifact art;
    art.step = "grid";
    art.k_in = art.k_out = p.k;
    art.prob_thresholds = value.prob_thresholds;
    art.circuit = grid_embed(normalize_accept_single_wire(*value.circuit));
    return art;
  }
  if (step == "kitaev") {
    if (!value.circuit) throw std::invalid_argument("kitaev expects a circuit");
    double eps = p.epsilon;
    if (!p.have_cs && value.prob_thresholds)
      eps = 1.0 - value.prob_thresholds->first;
    return wpcsat_to_sparse_ham(*value.circuit, p.k, eps);
  }
  if (step == "weft1") {
    if (!value.hamiltonian)
      throw std::invalid_argument("weft1 expects a hamiltonian");
    double a = p.a, b = p.b;
    if (!p.have_ab && value.energy_thresholds) {
      a = value.energy_thresholds->a;
      b = value.energy_thresholds->b;
    }
    return sparse_ham_to_weft1(*value.hamiltonian, a, b);
  }
  if (step == "mini") {
    if (!value.circuit) throw std::invalid_argument("mini expects a circuit");
    return mini_to_wpcsat(*value.circuit, p.k, p.n_enc, p.c, p.s);
  }
  if (step == "sqw2qsat") {
    if (!value.circuit)
      throw std::invalid_argument("sqw2qsat expects a circuit");
    return sqw1_to_qsat(*value.circuit);
  }
  if (step == "reversibilize") {
    if (!value.classical)
      throw std::invalid_argument("reversibilize expects a classical circuit");
    return reversibilize_classical(*value.classical);
  }
  throw std::invalid_argument("unknown step: " + step);
}

void advance_value(PipelineValue& value, const ReductionArtifact& art, int k) {
  PipelineValue next;
  next.k = art.k_out > 0 ? art.k_out : k;
  next.circuit = art.circuit;
  next.hamiltonian = art.hamiltonian;
  next.energy_thresholds = art.energy_thresholds;
  next.prob_thresholds = art.prob_thresholds;
  value = std::move(next);
}

int cmd_validate(const std::string& input, const std::string& dot_path) {
  const std::string text = read_file(input);
  const std::string kind = kind_of_json(text);
  if (kind == "circuit") {
    QuantumCircuit c = circuit_from_json(text);
    auto fv = validate_classical_fanout(c);
    std::cout << "circuit: " << c.n_total() << " wires, " << c.gates.size()
              << " gates, depth " << depth_of(c) << ", weft " << weft_of(c)
              << ", fanout " << (fv.ok ? "legal" : "ILLEGAL") << "\n";
    if (!dot_path.empty()) write_file(dot_path, circuit_to_dot(c));
    return fv.ok ? kExitPass : kExitVerifyFail;
  }
  if (kind == "hamiltonian") {
    LocalHamiltonian h = hamiltonian_from_json(text);
    InstanceReport rep = validate_instance(h);
    SparsityReport sp = classify_sparsity(h);
    std::cout << "hamiltonian: " << h.n << " qubits, " << h.terms.size()
              << " terms, "
              << (rep.valid ? "valid" : "INVALID") << ", "
              << (rep.all_projectors ? "projectors" : "general") << ", degree "
              << sp.max_degree << "\n";
    return rep.valid ? kExitPass : kExitVerifyFail;
  }
  if (kind == "graph" || kind == "classical_circuit" || kind == "state") {
    std::cout << kind << ": parsed\n";
    return kExitPass;
  }
  throw std::invalid_argument("unsupported kind: " + kind);
}

int cmd_simulate(const std::string& input, const std::string& witness_path,
                 const std::string& basis) {
  QuantumCircuit c = circuit_from_json(read_file(input));
  double p = 0.0;
  if (!witness_path.empty()) {
    const std::string wt = read_file(witness_path);
    p = acceptance_probability(c, sector_state_from_json(wt)).probability;
  } else if (!basis.empty()) {
    const std::uint64_t bits = string_to_bits(basis);
    FullState w = FullState::basis(c.n_witness, bits);
    p = acceptance_probability(c, w).probability;
  } else {
    throw std::invalid_argument("simulate needs --witness or --basis");
  }
  std::cout.precision(17);
  std::cout << "acceptance " << p << "\n";
  return kExitPass;
}

int cmd_diag(const std::string& input, int k, std::uint64_t max_dim,
             const std::string& output, std::uint64_t seed) {
  LocalHamiltonian h = hamiltonian_from_json(read_file(input));
  BasisIndexer idx(h.n, k);
  if (idx.dim() > max_dim)
    throw guard_error("sector dimension " + std::to_string(idx.dim()) +
                      " exceeds --max-dim");
  GroundResult g = min_energy_in_sector(h.blocks(), h.n, k,
                                        EigMethod::kAuto, seed);
  std::cout.precision(17);
  std::cout << "energy " << g.energy << "\n";
  if (!output.empty()) write_file(output, sector_state_to_json(g.witness));
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weight-sector circuit and Hamiltonian reduction toolkit"};
  app.require_subcommand(1);

  std::string input, output, witness, basis, dot_path, spec_path, outdir;
  int k = 1;
  double epsilon = 0.1;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::uint64_t max_dim = 4096;
  double a = 0.0, b = 1.0, cthr = 1.0, sthr = 0.0;
  int n_enc = 4;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", input, "input file");
    sub->add_option("--output", output, "output file");
    sub->add_option("--k", k, "Hamming weight parameter");
    sub->add_option("--epsilon", epsilon, "target error");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--max-dim", max_dim, "sector dimension guard");
    sub->add_option("--tol", tol, "verification tolerance");
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and check a file");
  add_common(validate);
  validate->add_option("--emit-dot", dot_path, "write the circuit DAG as dot");

  CLI::App* simulate = app.add_subcommand("simulate", "acceptance probability");
  add_common(simulate);
  simulate->add_option("--witness", witness, "sector-state witness file");
  simulate->add_option("--basis", basis, "basis witness bitstring");

  CLI::App* diag = app.add_subcommand("diag", "sector ground energy + witness");
  add_common(diag);

  CLI::App* reduce = app.add_subcommand("reduce", "run one reduction step");
  add_common(reduce);
  std::string step;
  reduce->add_option("step", step, "step name")->required();
  reduce->add_option("--a", a, "energy threshold a");
  reduce->add_option("--b", b, "energy threshold b");
  reduce->add_option("--c", cthr, "completeness");
  reduce->add_option("--s", sthr, "soundness");
  reduce->add_option("--n-enc", n_enc, "encoding block size for mini");
  std::string report_path;
  reduce->add_option("--report", report_path, "write a verification report");

  CLI::App* pipeline = app.add_subcommand("pipeline", "run a reduction chain");
  add_common(pipeline);
  pipeline->add_option("--spec", spec_path, "pipeline spec file")->required();
  pipeline->add_option("--outdir", outdir, "artifact directory")->required();

  CLI::App* report = app.add_subcommand("report", "pretty-print a report");
  add_common(report);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(input, dot_path);
    if (simulate->parsed()) return cmd_simulate(input, witness, basis);
    if (diag->parsed()) return cmd_diag(input, k, max_dim, output, seed);

    if (reduce->parsed()) {
      PipelineValue value = load_value(input);
      value.k = k;
      StepParams p;
      p.k = k;
      p.epsilon = epsilon;
      p.a = a;
      p.b = b;
      p.c = cthr;
      p.s = sthr;
      p.n_enc = n_enc;
      p.have_ab = reduce->count("--a") > 0 || reduce->count("--b") > 0;
      p.have_cs = reduce->count("--c") > 0 || reduce->count("--s") > 0;
      SourceInstance src = to_source(value);
      ReductionArtifact art = run_step(step, value, p);
      if (!output.empty()) write_file(output, artifact_to_json(art));
      bool ok = true;
      if (!report_path.empty()) {
        VerifyOptions vo;
        vo.seed = seed;
        vo.max_dim = max_dim;
        vo.tol_formula = tol;
        VerificationReport rep = verify_reduction(art, src, k, vo);
        rep.instance_id = input;
        write_file(report_path, report_to_json(rep));
        ok = rep.pass;
      }
      std::cout << "step " << step << (ok ? " ok" : " FAILED") << "\n";
      return ok ? kExitPass : kExitVerifyFail;
    }

    if (pipeline->parsed()) {
      namespace fs = std::filesystem;
      fs::create_directories(outdir);
      const std::string spec_text = read_file(spec_path);
      // spec: {"kind":"pipeline","seed":..,"steps":[{"step":..,"k":..,...}]}
      auto j = nlohmann::json::parse(spec_text);
      if (j.at("kind") != "pipeline")
        throw std::invalid_argument("not a pipeline spec");
      PipelineValue value = load_value(input);
      bool all_ok = true;
      int step_no = 0;
      int cur_k = j.value("k", k);
      for (const auto& sj : j.at("steps")) {
        StepParams p;
        p.k = sj.value("k", cur_k);
        p.epsilon = sj.value("epsilon", epsilon);
        p.have_ab = sj.contains("a") || sj.contains("b");
        p.a = sj.value("a", 0.0);
        p.b = sj.value("b", 1.0);
        p.have_cs = sj.contains("c") || sj.contains("s");
        p.c = sj.value("c", 1.0);
        p.s = sj.value("s", 0.0);
        p.n_enc = sj.value("n", 4);
        const std::string sname = sj.at("step").get<std::string>();
        SourceInstance src = to_source(value);
        ReductionArtifact art = run_step(sname, value, p);
        const std::string base =
            outdir + "/" + std::to_string(step_no) + "_" + sname;
        write_file(base + ".artifact.json", artifact_to_json(art));
        VerifyOptions vo;
        vo.seed = j.value("seed", seed);
        vo.max_dim = max_dim;
        VerificationReport rep = verify_reduction(art, src, p.k, vo);
        rep.instance_id = input + "#" + std::to_string(step_no);
        write_file(base + ".report.json", report_to_json(rep));
        std::cout << "step " << sname << (rep.pass ? " ok" : " FAILED")
                  << " (" << rep.rows.size() << " checks)\n";
        all_ok = all_ok && rep.pass;
        advance_value(value, art, p.k);
        cur_k = value.k;
        ++step_no;
      }
      return all_ok ? kExitPass : kExitVerifyFail;
    }

    if (report->parsed()) {
      VerificationReport rep = report_from_json(read_file(input));
      std::cout << "report " << rep.instance_id << " step=" << rep.step
                << " " << (rep.pass ? "PASS" : "FAIL") << "\n";
      for (const auto& r : rep.rows)
        std::cout << "  " << (r.pass ? "ok   " : "FAIL ") << r.name
                  << " expected=" << r.expected << " observed=" << r.observed
                  << " residual=" << r.residual << "\n";
      return rep.pass ? kExitPass : kExitVerifyFail;
    }
  } catch (const guard_error& e) {
    std::cerr << "guard refusal: " << e.what() << "\n";
    return kExitGuardRefusal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
