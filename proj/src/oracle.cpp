#include "loopver/oracle.hpp"

#include <algorithm>
#include <set>

#include "loopver/aggregator.hpp"
#include "loopver/body_checker.hpp"
#include "loopver/pretty.hpp"

namespace loopver::oracle {

using frontend::ArithExpr;
using frontend::BodyItem;
using frontend::ValidatedProgram;

const char* access_name(Access a) {
  return a == Access::Read ? "read" : "write";
}

const char* dep_kind_name(DepKind k) {
  switch (k) {
    case DepKind::RAW: return "RAW";
    case DepKind::WAR: return "WAR";
    case DepKind::WAW: return "WAW";
  }
  return "RAW";
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {

long long chk(long long a, long long b, char op) {
  long long r = 0;
  bool bad = op == '+'   ? __builtin_add_overflow(a, b, &r)
             : op == '-' ? __builtin_sub_overflow(a, b, &r)
                         : __builtin_mul_overflow(a, b, &r);
  if (bad) fail(Code::ArithmeticOverflow, "arithmetic overflow in evaluation");
  return r;
}

long long draw(uint64_t key) {
  return static_cast<long long>(splitmix64(key) % 201) - 100;
}

// One statement-at-a-time interpreter. The footprint pointer is set for
// the reference run (every access must land inside the requires
// footprint); replays skip the check because access cells are affine in i
// and therefore identical to the reference run's.
struct Interp {
  const ValidatedProgram& vp;
  long long n;
  Memory mem;
  const agg::ConcreteFootprint* fp = nullptr;
  ExecutionTrace* trace = nullptr;
  long long cur_iter = 0;
  size_t cur_stmt = 0;

  void check_footprint(const std::string& array, long long j) {
    if (!fp) return;
    auto it = fp->find(array);
    if (it == fp->end() || !it->second.count(j))
      fail(Code::OutOfFootprint,
           "access to " + array + "[" + std::to_string(j) + "] at " +
               checker::stmt_name(vp, cur_stmt) + " in iteration " +
               std::to_string(cur_iter) + " is outside the contract footprint");
  }

  long long load(const std::string& array, long long j) {
    check_footprint(array, j);
    if (trace)
      trace->events.push_back({cur_iter, cur_stmt,
                               checker::stmt_name(vp, cur_stmt), Access::Read,
                               array, j, 0});
    long long v = 0;
    auto it = mem.arrays.find(array);
    if (it != mem.arrays.end()) {
      auto jt = it->second.find(j);
      if (jt != it->second.end()) v = jt->second;
    }
    if (trace) trace->events.back().value = v;
    return v;
  }

  long long eval(const ArithExpr& e) {
    using K = ArithExpr::Kind;
    switch (e.kind) {
      case K::IntLit: return e.value;
      case K::Var:
        if (e.name == vp.iter_var) return cur_iter;
        if (e.name == vp.bound_param) return n;
        if (auto it = mem.scalars.find(e.name); it != mem.scalars.end())
          return it->second;
        return 0;
      case K::Cell: return load(e.name, eval(e.kids[0]));
      case K::Add: return chk(eval(e.kids[0]), eval(e.kids[1]), '+');
      case K::Sub: return chk(eval(e.kids[0]), eval(e.kids[1]), '-');
      case K::Mul: return chk(eval(e.kids[0]), eval(e.kids[1]), '*');
      case K::Min: {
        long long a = eval(e.kids[0]), b = eval(e.kids[1]);
        return std::min(a, b);
      }
      case K::Neg: return chk(0, eval(e.kids[0]), '-');
    }
    fail(Code::Internal, "unreachable expression kind");
  }

  void exec(long long iter, size_t k) {
    const frontend::Statement& st = vp.program.loop.body[k];
    if (st.kind != frontend::Statement::Kind::Assign) return;
    cur_iter = iter;
    cur_stmt = k;
    long long v = eval(st.rhs);
    long long j = eval(st.index);
    check_footprint(st.array, j);
    if (trace)
      trace->events.push_back({iter, k, checker::stmt_name(vp, k),
                               Access::Write, st.array, j, v});
    mem.arrays[st.array][j] = v;
  }
};

}  // namespace

Memory seed_memory(const ValidatedProgram& vp, long long n, uint64_t seed) {
  uint64_t h = fnv1a64(frontend::to_source(vp.program));
  uint64_t base = splitmix64(splitmix64(h ^ static_cast<uint64_t>(n)) ^ seed);

  Memory mem;
  auto fp = agg::aggregate_at(vp.pre, vp.bounds, n);
  for (const auto& [array, cells] : fp) {
    uint64_t ah = splitmix64(base ^ fnv1a64(array));
    for (const auto& [j, unused] : cells)
      mem.arrays[array][j] = draw(ah ^ static_cast<uint64_t>(j));
  }
  for (const auto& p : vp.program.params) {
    if (p.kind == frontend::ParamKind::IntArray) continue;
    if (p.name == vp.bound_param) continue;
    mem.scalars[p.name] = draw(splitmix64(base ^ fnv1a64(p.name)) ^ 1);
  }
  return mem;
}

ExecutionTrace run_sequential(const ValidatedProgram& vp, long long n,
                              const Memory& initial) {
  ExecutionTrace tr;
  auto fp = agg::aggregate_at(vp.pre, vp.bounds, n);
  Interp in{vp, n, initial, &fp, &tr};
  long long lo = vp.bounds.lo.eval(0, n), hi = vp.bounds.hi.eval(0, n);
  for (long long i = lo; i < hi; ++i)
    for (size_t k = 0; k < vp.body.size(); ++k) in.exec(i, k);
  tr.final_memory = std::move(in.mem);
  return tr;
}

std::vector<DependenceRecord> compute_dependences(const ExecutionTrace& trace) {
  std::set<DependenceRecord> out;
  const auto& ev = trace.events;
  for (size_t p = 0; p < ev.size(); ++p) {
    for (size_t q = p + 1; q < ev.size(); ++q) {
      if (ev[q].iter <= ev[p].iter) continue;
      if (ev[p].array != ev[q].array || ev[p].index != ev[q].index) continue;
      bool pw = ev[p].kind == Access::Write, qw = ev[q].kind == Access::Write;
      if (!pw && !qw) continue;
      DepKind kind = pw && qw ? DepKind::WAW : pw ? DepKind::RAW : DepKind::WAR;
      out.insert({ev[p].label, ev[q].label, kind, ev[q].iter - ev[p].iter,
                  ev[p].array,
                  ev[p].stmt <= ev[q].stmt ? checker::Direction::Forward
                                           : checker::Direction::Backward});
    }
  }
  return {out.begin(), out.end()};
}

ScheduleDag build_dag(const ValidatedProgram& vp, long long n) {
  ScheduleDag dag;
  dag.lo = vp.bounds.lo.eval(0, n);
  long long hi = vp.bounds.hi.eval(0, n);
  dag.n_iters = std::max<long long>(0, hi - dag.lo);
  dag.width = vp.body.size();
  dag.succs.assign(static_cast<size_t>(dag.n_iters) * dag.width, {});
  for (long long i = dag.lo; i < hi; ++i) {
    for (size_t k = 0; k + 1 < dag.width; ++k)
      dag.succs[dag.node(i, k)].push_back(dag.node(i, k + 1));
    for (size_t s : vp.send_sites) {
      const BodyItem& send = vp.body[s];
      long long j = i + send.distance;
      if (j >= dag.lo && j < hi)
        dag.succs[dag.node(i, s)].push_back(dag.node(j, send.target_index));
    }
  }
  return dag;
}

namespace {

struct Rng {
  uint64_t state;
  uint64_t next() { return state = splitmix64(state); }
};

// Kahn's algorithm; sequential = true picks the smallest ready node, which
// reproduces program order because every edge increases the node id.
std::vector<uint32_t> linear_extension(const ScheduleDag& dag, Rng* rng) {
  size_t v = dag.succs.size();
  std::vector<uint32_t> indeg(v, 0), order;
  order.reserve(v);
  for (const auto& ss : dag.succs)
    for (uint32_t s : ss) ++indeg[s];
  std::vector<uint32_t> ready;
  for (uint32_t u = 0; u < v; ++u)
    if (indeg[u] == 0) ready.push_back(u);
  while (!ready.empty()) {
    size_t pick = 0;
    if (rng) {
      pick = static_cast<size_t>(rng->next() % ready.size());
    } else {
      for (size_t t = 1; t < ready.size(); ++t)
        if (ready[t] < ready[pick]) pick = t;
    }
    uint32_t u = ready[pick];
    ready[pick] = ready.back();
    ready.pop_back();
    order.push_back(u);
    for (uint32_t s : dag.succs[u])
      if (--indeg[s] == 0) ready.push_back(s);
  }
  return order;
}

Memory execute_order(const ValidatedProgram& vp, long long n,
                     const Memory& initial, const ScheduleDag& dag,
                     const std::vector<uint32_t>& order) {
  Interp in{vp, n, initial, nullptr, nullptr};
  for (uint32_t id : order) {
    long long iter = dag.lo + static_cast<long long>(id / dag.width);
    in.exec(iter, id % dag.width);
  }
  return std::move(in.mem);
}

// Reachability bitsets; node ids are already topologically sorted.
std::vector<std::vector<uint64_t>> reachability(const ScheduleDag& dag) {
  size_t v = dag.succs.size(), words = (v + 63) / 64;
  std::vector<std::vector<uint64_t>> reach(v, std::vector<uint64_t>(words, 0));
  for (size_t u = v; u-- > 0;) {
    for (uint32_t s : dag.succs[u]) {
      reach[u][s / 64] |= 1ull << (s % 64);
      for (size_t w = 0; w < words; ++w) reach[u][w] |= reach[s][w];
    }
  }
  return reach;
}

struct InstanceAccess {
  uint32_t node;
  bool write;
};

void find_races(const ValidatedProgram& vp, long long n,
                const ScheduleDag& dag, EquivalenceReport& rep) {
  if (dag.succs.empty()) return;
  auto reach = reachability(dag);
  auto ordered = [&](uint32_t a, uint32_t b) {
    if (a > b) std::swap(a, b);
    return (reach[a][b / 64] >> (b % 64)) & 1;
  };

  std::map<std::pair<std::string, long long>, std::vector<InstanceAccess>> by_cell;
  long long hi = dag.lo + dag.n_iters;
  for (long long i = dag.lo; i < hi; ++i) {
    for (size_t k = 0; k < vp.body.size(); ++k) {
      const BodyItem& item = vp.body[k];
      if (item.kind != BodyItem::Kind::Assign) continue;
      uint32_t id = dag.node(i, k);
      by_cell[{item.write.array, item.write.index.eval(i, n)}].push_back(
          {id, true});
      for (const auto& r : item.reads)
        by_cell[{r.array, r.index.eval(i, n)}].push_back({id, false});
    }
  }

  std::set<RaceRecord> races;
  for (const auto& [cell, accs] : by_cell) {
    for (size_t p = 0; p < accs.size(); ++p) {
      for (size_t q = p + 1; q < accs.size(); ++q) {
        if (!accs[p].write && !accs[q].write) continue;
        if (accs[p].node == accs[q].node || ordered(accs[p].node, accs[q].node))
          continue;
        ++rep.race_count;
        if (races.size() < 16) {
          uint32_t a = std::min(accs[p].node, accs[q].node);
          uint32_t b = std::max(accs[p].node, accs[q].node);
          races.insert({checker::stmt_name(vp, a % dag.width),
                        dag.lo + static_cast<long long>(a / dag.width),
                        checker::stmt_name(vp, b % dag.width),
                        dag.lo + static_cast<long long>(b / dag.width),
                        cell.first + "[" + std::to_string(cell.second) + "]"});
        }
      }
    }
  }
  rep.races.assign(races.begin(), races.end());
}

constexpr size_t kExhaustiveCap = 50000;

void enumerate_extensions(const ValidatedProgram& vp, long long n,
                          const Memory& initial, const Memory& expect,
                          const ScheduleDag& dag, EquivalenceReport& rep) {
  size_t v = dag.succs.size();
  std::vector<uint32_t> indeg(v, 0);
  for (const auto& ss : dag.succs)
    for (uint32_t s : ss) ++indeg[s];
  std::vector<uint32_t> ready, order;
  for (uint32_t u = 0; u < v; ++u)
    if (indeg[u] == 0) ready.push_back(u);

  bool capped = false;
  auto rec = [&](auto&& self) -> void {
    if (rep.exhaustive_orders >= kExhaustiveCap) {
      capped = true;
      return;
    }
    if (order.size() == v) {
      ++rep.exhaustive_orders;
      if (!(execute_order(vp, n, initial, dag, order) == expect))
        rep.exhaustive_equal = false;
      return;
    }
    std::vector<uint32_t> snapshot = ready;
    std::sort(snapshot.begin(), snapshot.end());
    for (uint32_t u : snapshot) {
      ready.erase(std::find(ready.begin(), ready.end(), u));
      order.push_back(u);
      for (uint32_t s : dag.succs[u])
        if (--indeg[s] == 0) ready.push_back(s);
      self(self);
      for (uint32_t s : dag.succs[u])
        if (indeg[s]++ == 0)
          ready.erase(std::find(ready.begin(), ready.end(), s));
      order.pop_back();
      ready.push_back(u);
      if (capped) return;
    }
  };
  if (v > 0)
    rec(rec);
  else
    rep.exhaustive_orders = 1;  // the empty order
  rep.exhaustive = !capped;
}

}  // namespace

EquivalenceReport replay_schedules(const ValidatedProgram& vp, long long n,
                                   const Memory& initial, int trials,
                                   uint64_t seed) {
  EquivalenceReport rep;
  rep.n = n;
  rep.trials_run = trials;

  Memory expect = run_sequential(vp, n, initial).final_memory;
  ScheduleDag dag = build_dag(vp, n);
  find_races(vp, n, dag, rep);

  Rng rng{splitmix64(seed ^ splitmix64(static_cast<uint64_t>(n)))};
  for (int t = 0; t < trials; ++t) {
    auto order = linear_extension(dag, t == 0 ? nullptr : &rng);
    if (!(execute_order(vp, n, initial, dag, order) == expect)) {
      rep.all_equal = false;
      rep.mismatched_trials.push_back(t);
    }
  }

  if (n <= 3) enumerate_extensions(vp, n, initial, expect, dag, rep);
  return rep;
}

OracleReport cross_validate(const ValidatedProgram& vp,
                            const std::vector<long long>& n_set,
                            const std::vector<uint64_t>& seeds, int trials) {
  OracleReport rep;
  rep.verdict = classify::classify(vp, checker::check_iteration(vp));

  std::set<DependenceRecord> all;
  for (long long n : n_set) {
    PerNResult r;
    r.n = n;
    std::set<DependenceRecord> first, per_n_union;
    for (size_t si = 0; si < seeds.size(); ++si) {
      Memory mem = seed_memory(vp, n, seeds[si]);
      auto deps = compute_dependences(run_sequential(vp, n, mem));
      std::set<DependenceRecord> cur(deps.begin(), deps.end());
      if (si == 0) {
        first = cur;
        r.replay = replay_schedules(vp, n, mem, trials, seeds[si]);
      } else if (cur != first) {
        r.stable_across_seeds = false;
      }
      per_n_union.insert(cur.begin(), cur.end());
    }
    all.insert(per_n_union.begin(), per_n_union.end());
    r.records.assign(per_n_union.begin(), per_n_union.end());
    rep.per_n.push_back(std::move(r));
  }
  rep.observed.assign(all.begin(), all.end());

  using classify::Kind;
  bool has_backward = false, all_forward = true;
  for (const auto& d : rep.observed) {
    if (d.direction == checker::Direction::Backward) {
      has_backward = true;
      all_forward = false;
    }
  }
  switch (rep.verdict.kind) {
    case Kind::Independent:
      rep.rule = "Independent requires no observed loop-carried dependences";
      rep.agree = rep.observed.empty();
      if (!rep.agree)
        rep.counterexample = "observed " + std::string(dep_kind_name(rep.observed[0].kind)) +
                             " dependence " + rep.observed[0].src + " -> " +
                             rep.observed[0].sink + " on " + rep.observed[0].array;
      break;
    case Kind::ForwardOnly:
      rep.rule = "ForwardOnly requires every observed dependence to be forward";
      rep.agree = all_forward;
      if (!rep.agree)
        for (const auto& d : rep.observed)
          if (d.direction == checker::Direction::Backward) {
            rep.counterexample = "observed backward dependence " + d.src +
                                 " -> " + d.sink + " on " + d.array;
            break;
          }
      break;
    case Kind::Backward:
      rep.rule = "Backward requires at least one observed backward dependence";
      rep.agree = has_backward;
      if (!rep.agree)
        rep.counterexample = "no backward dependence observed";
      break;
    case Kind::Unverified:
      rep.applicable = false;
      rep.rule = "no agreement claim for unverified programs";
      rep.agree = false;
      break;
  }
  return rep;
}

}  // namespace loopver::oracle
