#include "loopver/body_checker.hpp"

#include <algorithm>

namespace loopver::checker {

using frontend::BodyItem;
using frontend::ValidatedProgram;
using resources::Cell;
using resources::Fraction;
using resources::Guard;
using resources::NormClause;
using resources::PermissionMap;
using resources::Region;
using resources::Truth;

const char* action_name(Action a) {
  switch (a) {
    case Action::Read: return "read";
    case Action::Write: return "write";
    case Action::Send: return "send";
    case Action::Receive: return "receive";
  }
  return "?";
}

const char* direction_name(Direction d) {
  return d == Direction::Forward ? "forward" : "backward";
}

std::string stmt_name(const ValidatedProgram& vp, size_t body_index) {
  const BodyItem& item = vp.body[body_index];
  if (item.label) return *item.label;
  return "stmt" + std::to_string(body_index);
}

std::map<std::string, std::vector<ReceivePoint>> receive_points(
    const ValidatedProgram& vp) {
  std::map<std::string, std::vector<ReceivePoint>> out;
  for (size_t site : vp.send_sites) {
    const BodyItem& send = vp.body[site];
    ReceivePoint rp;
    rp.send_site = site;
    for (const NormClause& cl : send.formula) {
      NormClause shifted = cl;
      shifted.atom.cell.index =
          resources::aff_shift_iter(cl.atom.cell.index, -send.distance);
      rp.formula.push_back(std::move(shifted));
    }
    rp.existence = vp.bounds.is_iteration_at_offset(-send.distance);
    out[send.target].push_back(std::move(rp));
  }
  return out;
}

namespace {

std::string cell_name(const ValidatedProgram& vp, const Cell& c) {
  return resources::cell_str(c, vp.iter_var,
                             vp.bound_param.empty() ? "N" : vp.bound_param);
}

// Executes the body symbolically in one region. The region is expected to
// decide every guard involved; split_regions guarantees that.
RegionResult run_region(const ValidatedProgram& vp, const Region& region,
                        const std::map<std::string, std::vector<ReceivePoint>>&
                            receives) {
  RegionResult res;
  res.region = region;
  try {
    PermissionMap perms = resources::normalize(vp.pre, region);
    auto record = [&res](std::string stmt, Action a, const Cell& cell,
                         Fraction before, Fraction after) {
      res.trace.push_back(TraceStep{std::move(stmt), a, cell, before, after});
    };

    for (size_t k = 0; k < vp.body.size(); ++k) {
      const BodyItem& item = vp.body[k];
      std::string name = stmt_name(vp, k);

      if (item.label) {
        auto it = receives.find(*item.label);
        if (it != receives.end()) {
          for (const ReceivePoint& rp : it->second) {
            Truth t = decide(region, rp.existence);
            if (t == Truth::Unknown)
              fail(Code::Internal,
                   "region does not decide a receive condition", item.span);
            if (t == Truth::False) continue;
            for (const NormClause& cl : rp.formula) {
              Fraction before = perms.fraction_at(cl.atom.cell, region);
              perms.add(cl.atom.cell, cl.atom.frac, region, cl.atom.span);
              record(name, Action::Receive, cl.atom.cell, before,
                     perms.fraction_at(cl.atom.cell, region));
            }
          }
        }
      }

      if (item.kind == BodyItem::Kind::Assign) {
        for (const Cell& cell : item.reads) {
          Fraction f = perms.fraction_at(cell, region);
          if (f.is_zero())
            fail(Code::InsufficientRead,
                 "no read permission on " + cell_name(vp, cell) + " at " +
                     name,
                 item.span);
          record(name, Action::Read, cell, f, f);
        }
        Fraction f = perms.fraction_at(item.write, region);
        if (!f.is_one())
          fail(Code::InsufficientWrite,
               "write to " + cell_name(vp, item.write) + " at " + name +
                   " holds " + f.str() + " instead of 1",
               item.span);
        record(name, Action::Write, item.write, f, f);
      } else {
        Guard exists = vp.bounds.is_iteration_at_offset(item.distance);
        Truth t = decide(region, exists);
        if (t == Truth::Unknown)
          fail(Code::Internal, "region does not decide a send condition",
               item.span);
        if (t == Truth::True) {
          for (const NormClause& cl : item.formula) {
            Fraction before = perms.fraction_at(cl.atom.cell, region);
            if (!perms.subtract(cl.atom.cell, cl.atom.frac, region))
              fail(Code::SendWithoutPermission,
                   "send of " + cl.atom.frac.str() + " on " +
                       cell_name(vp, cl.atom.cell) + " at " + name +
                       " exceeds the " + before.str() + " held",
                   item.span);
            record(name, Action::Send, cl.atom.cell, before,
                   perms.fraction_at(cl.atom.cell, region));
          }
        }
      }
    }

    PermissionMap expected = resources::normalize(vp.post, region);
    auto diff = perms.diff_against(expected, region);
    if (!diff.equal()) {
      std::string msg = "final permissions do not match the ensures clause;";
      for (const auto& m : diff.missing)
        msg += " missing " + m.need.str() + " of " + cell_name(vp, m.cell) +
               " (holds " + m.have.str() + ");";
      for (const auto& l : diff.leftover)
        msg += " leftover " + l.have.str() + " of " + cell_name(vp, l.cell) +
               " (needs " + l.need.str() + ");";
      fail(Code::PostconditionMismatch, msg, vp.program.loop.span);
    }
    res.pass = true;
  } catch (const DiagError& e) {
    res.pass = false;
    res.diag = e.diag();
  }
  return res;
}

}  // namespace

std::vector<SymbolicState> apply_send(const SymbolicState& state,
                                      const BodyItem& send,
                                      const resources::LoopBounds& bounds) {
  if (send.kind != BodyItem::Kind::Send)
    fail(Code::Internal, "apply_send on a non-send statement", send.span);
  if (send.distance <= 0)
    fail(Code::NonPositiveDistance,
         "send distance must be at least 1, got " +
             std::to_string(send.distance),
         send.span);
  Guard exists = bounds.is_iteration_at_offset(send.distance);
  Truth t = decide(state.region, exists);
  if (t == Truth::Unknown) {
    // Split on the first undecided condition and recurse on both halves.
    for (const auto& c : exists) {
      if (decide(state.region, c) != Truth::Unknown) continue;
      std::vector<SymbolicState> out;
      SymbolicState pos = state;
      pos.region.add(c);
      SymbolicState neg = state;
      neg.region.add(resources::ge0(resources::aff_sub(
          resources::aff_neg(c.expr), resources::aff_const(1))));
      for (const auto& half : {pos, neg}) {
        if (!resources::feasible(half.region)) continue;
        for (auto& s : apply_send(half, send, bounds)) out.push_back(std::move(s));
      }
      return out;
    }
    fail(Code::Internal, "undecided send condition without undecided atom",
         send.span);
  }
  SymbolicState next = state;
  if (t == Truth::True) {
    for (const NormClause& cl : send.formula) {
      if (!next.perms.subtract(cl.atom.cell, cl.atom.frac, next.region))
        fail(Code::SendWithoutPermission,
             "send exceeds the held fraction on " + cl.atom.cell.array +
                 "[...]",
             send.span);
    }
  }
  return {std::move(next)};
}

CheckReport check_iteration(const ValidatedProgram& vp) {
  CheckReport report;

  for (size_t site : vp.send_sites) {
    const BodyItem& send = vp.body[site];
    SendUse use;
    use.site = site;
    use.label = send.label;
    use.target = send.target;
    use.distance = send.distance;
    // The receive point sits just before the target statement, so the
    // transfer runs forward exactly when the target comes later.
    use.direction = send.target_index > site ? Direction::Forward
                                             : Direction::Backward;
    report.sends_used.push_back(std::move(use));
  }

  for (size_t site : vp.send_sites) {
    const BodyItem& send = vp.body[site];
    if (send.distance <= 0) {
      report.pass = false;
      report.primary = Diagnostic{
          Code::NonPositiveDistance,
          "send distance must be at least 1, got " +
              std::to_string(send.distance),
          send.span};
      return report;
    }
  }

  std::vector<NormClause> all_clauses = vp.pre;
  all_clauses.insert(all_clauses.end(), vp.post.begin(), vp.post.end());
  std::vector<long long> distances;
  for (size_t site : vp.send_sites)
    distances.push_back(vp.body[site].distance);

  auto receives = receive_points(vp);
  auto regions = resources::split_regions(all_clauses, distances, vp.bounds);

  report.pass = true;
  for (const Region& region : regions) {
    RegionResult res = run_region(vp, region, receives);
    if (!res.pass) report.pass = false;
    report.regions.push_back(std::move(res));
  }

  // Primary diagnostic: access violations outrank postcondition mismatches,
  // which are usually a downstream symptom; ties break by region order.
  if (!report.pass) {
    for (const auto& r : report.regions) {
      if (!r.pass && r.diag &&
          r.diag->code != Code::PostconditionMismatch) {
        report.primary = r.diag;
        break;
      }
    }
    if (!report.primary) {
      for (const auto& r : report.regions)
        if (!r.pass && r.diag) { report.primary = r.diag; break; }
    }
  }
  return report;
}

}  // namespace loopver::checker
