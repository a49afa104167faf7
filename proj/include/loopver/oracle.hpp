#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loopver/classifier.hpp"
#include "loopver/validate.hpp"

namespace loopver::oracle {

struct Memory {
  std::map<std::string, std::map<long long, long long>> arrays;
  std::map<std::string, long long> scalars;  // bound param excluded

  friend bool operator==(const Memory&, const Memory&) = default;
};

enum class Access { Read, Write };
const char* access_name(Access a);

struct AccessEvent {
  long long iter = 0;
  size_t stmt = 0;       // body index
  std::string label;     // display name of the statement
  Access kind = Access::Read;
  std::string array;
  long long index = 0;
  long long value = 0;
};

struct ExecutionTrace {
  std::vector<AccessEvent> events;  // sequential program order
  Memory final_memory;
};

enum class DepKind { RAW, WAR, WAW };
const char* dep_kind_name(DepKind k);

struct DependenceRecord {
  std::string src;   // statement of the earlier iteration
  std::string sink;  // statement of the later iteration
  DepKind kind = DepKind::RAW;
  long long distance = 0;  // > 0, loop-carried only
  std::string array;
  checker::Direction direction = checker::Direction::Forward;

  friend bool operator==(const DependenceRecord&,
                         const DependenceRecord&) = default;
  friend auto operator<=>(const DependenceRecord&,
                          const DependenceRecord&) = default;
};

// Statement instances (iteration, body index) ordered by intra-iteration
// program order plus one edge per send from its site to the receive point
// of the target statement d iterations later. d > 0 keeps it acyclic and
// sequential execution is always a linear extension.
struct ScheduleDag {
  long long lo = 0;
  long long n_iters = 0;
  size_t width = 0;  // body items per iteration
  std::vector<std::vector<uint32_t>> succs;  // node id -> successor ids

  uint32_t node(long long iter, size_t item) const {
    return static_cast<uint32_t>((iter - lo) * static_cast<long long>(width) +
                                 static_cast<long long>(item));
  }
};

struct RaceRecord {
  std::string stmt_a;
  long long iter_a = 0;
  std::string stmt_b;
  long long iter_b = 0;
  std::string cell;

  friend bool operator==(const RaceRecord&, const RaceRecord&) = default;
  friend auto operator<=>(const RaceRecord&, const RaceRecord&) = default;
};

struct EquivalenceReport {
  long long n = 0;
  int trials_run = 0;
  bool all_equal = true;          // every sampled schedule matched sequential
  std::vector<int> mismatched_trials;
  std::vector<RaceRecord> races;  // DAG-unordered conflicting instances
  size_t race_count = 0;          // races found (list above is capped)
  bool exhaustive = false;        // all linear extensions enumerated (small N)
  size_t exhaustive_orders = 0;
  bool exhaustive_equal = true;
};

// Splittable generator: every drawn value is a pure function of the key
// components, so runs reproduce exactly.
uint64_t fnv1a64(const std::string& s);
uint64_t splitmix64(uint64_t x);

// Uniform values in [-100, 100] for every cell in the aggregate requires
// footprint plus every non-bound scalar parameter, keyed by
// (program text, N, seed, name, index).
Memory seed_memory(const frontend::ValidatedProgram& vp, long long n,
                   uint64_t seed);

// Reference semantics: straight sequential interpretation with checked
// 64-bit arithmetic. Throws OutOfFootprint when an access falls outside
// the aggregated requires footprint, ArithmeticOverflow on overflow.
ExecutionTrace run_sequential(const frontend::ValidatedProgram& vp,
                              long long n, const Memory& initial);

// Loop-carried dependences: accesses from iterations i < j on the same
// cell, at least one a write. One record per (src, sink, kind, distance,
// array) class; direction is forward iff the source statement is at or
// before the sink statement in the body.
std::vector<DependenceRecord> compute_dependences(const ExecutionTrace& trace);

ScheduleDag build_dag(const frontend::ValidatedProgram& vp, long long n);

// Samples `trials` random linear extensions of the DAG (trial 0 is forced
// to the sequential order), executes each and compares final memory to the
// sequential run. Also runs the happens-before race check, and enumerates
// every extension exhaustively when N <= 3.
EquivalenceReport replay_schedules(const frontend::ValidatedProgram& vp,
                                   long long n, const Memory& initial,
                                   int trials, uint64_t seed);

struct PerNResult {
  long long n = 0;
  std::vector<DependenceRecord> records;  // union over seeds
  bool stable_across_seeds = true;        // identical records per seed
  EquivalenceReport replay;               // first seed's memory
};

struct OracleReport {
  classify::Verdict verdict;
  std::vector<PerNResult> per_n;
  std::vector<DependenceRecord> observed;  // union over all (N, seed)
  bool applicable = true;   // false when the program is Unverified
  bool agree = false;
  std::string rule;         // the agreement criterion that was applied
  std::string counterexample;  // first disagreement, empty if none
};

// Empirical check of the verdict: Independent must show no loop-carried
// dependences, ForwardOnly only forward ones, Backward at least one
// backward one.
OracleReport cross_validate(const frontend::ValidatedProgram& vp,
                            const std::vector<long long>& n_set,
                            const std::vector<uint64_t>& seeds, int trials);

}  // namespace loopver::oracle
