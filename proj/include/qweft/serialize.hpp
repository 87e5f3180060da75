#pragma once

#include <string>

#include "qweft/reductions.hpp"
#include "qweft/verify.hpp"

namespace qweft {

// All file formats are JSON objects with a top-level "kind" in {circuit,
// hamiltonian, state, graph, classical_circuit, report, artifact, pipeline};
// complex entries are [re, im] pairs.

std::string circuit_to_json(const QuantumCircuit& c);
QuantumCircuit circuit_from_json(const std::string& text);

std::string hamiltonian_to_json(const LocalHamiltonian& h);
LocalHamiltonian hamiltonian_from_json(const std::string& text);

std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

std::string classical_to_json(const ClassicalCircuit& c);
ClassicalCircuit classical_from_json(const std::string& text);

std::string sector_state_to_json(const SectorState& s);
SectorState sector_state_from_json(const std::string& text);

std::string full_state_to_json(const FullState& s);
FullState full_state_from_json(const std::string& text);

std::string report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const std::string& text);

std::string artifact_to_json(const ReductionArtifact& a);
ReductionArtifact artifact_from_json(const std::string& text);

// "kind" of a serialized document, for format dispatch
std::string kind_of_json(const std::string& text);

// Graphviz rendering of the circuit gate DAG
std::string circuit_to_dot(const QuantumCircuit& c);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace qweft
