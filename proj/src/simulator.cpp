#include "dmmf/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include "dmmf/errors.hpp"
#include "dmmf/format.hpp"
#include "dmmf/rng.hpp"

namespace dmmf {

// ---------------------------------------------------------------------------
// Scenario

MechanismConfig Scenario::mechanism_config() const {
  if (agents.empty()) throw ConfigError("scenario: no agents");
  std::vector<Ratio> shares;
  for (const auto& a : agents) shares.push_back(a.alpha);
  MechanismConfig mc;
  mc.shares = FairShares::from_ratios(shares);
  mc.mode = mode;
  mc.horizon = horizon;
  mc.r = r;
  std::int64_t longest = 1;
  for (const auto& a : agents)
    if (a.model) longest = std::max(longest, a.model->k_max());
  mc.k_max = k_max.value_or(mode == MechanismMode::single_round ? 1 : longest);
  if (mode == MechanismMode::single_round && longest > 1)
    throw ConfigError("scenario: single-round mode cannot use durations longer than 1");
  if (longest > mc.k_max) throw ConfigError("scenario: a value model demands more than k_max rounds");
  mc.validate();
  return mc;
}

void Scenario::validate() const {
  if (horizon < 1) throw ConfigError("scenario: horizon must be >= 1");
  const MechanismConfig mc = mechanism_config();
  const Mechanism mech(mc);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    if (is_adversary(a.strategy)) {
      Adversary(a.strategy, i, a.target.value_or(0), mech);
    } else {
      if (!a.model) throw ConfigError("agent " + std::to_string(i) + ": strategy " + strategy_name(a.strategy) + " needs a value model");
      if (a.target) throw ConfigError("agent " + std::to_string(i) + ": only adversaries take a target");
      AgentRule(a.strategy, *a.model, mc.shares.alpha(i));
    }
  }
}

// ---------------------------------------------------------------------------
// Bounds on blocking

bool single_round_bound_holds(std::int64_t w, std::int64_t total, std::int64_t blocked, std::int64_t wins) {
  return int128{w} * blocked <= int128{total - w} * (1 + int128{wins});
}

bool reusable_bound_holds(std::int64_t w, std::int64_t total, std::int64_t blocked, std::int64_t allocation,
                          std::int64_t k_max, std::int64_t horizon, const Ratio& r) {
  const std::int64_t rest = total - w;
  if (rest == 0) return blocked == 0;
  if (int128{w} * blocked <= int128{rest} * (int128{k_max} + allocation)) return true;
  // blocked <= rest T / (total r)  <=>  blocked total / (rest T) <= r_den / r_num
  return compare_fractions(int128{blocked} * total, int128{rest} * horizon, r.den(), r.num()) <= 0;
}

LemmaCheck check_lemma_single(const EpisodeTrace& trace, std::size_t focal, const FairShares& shares) {
  LemmaCheck out;
  std::int64_t blocked = 0, wins = 0;
  for (std::int64_t t = 1; t <= trace.horizon; ++t) {
    const auto& rec = trace.at(t, focal);
    blocked += rec.blocked;
    wins += rec.won;
    if (!single_round_bound_holds(shares.weight(focal), shares.total(), blocked, wins)) {
      out.pass = false;
      out.first_failure = t;
      return out;
    }
  }
  return out;
}

LemmaCheck check_lemma_mult(const EpisodeTrace& trace, std::size_t focal, const FairShares& shares,
                            std::int64_t k_max, const Ratio& r) {
  LemmaCheck out;
  std::int64_t blocked = 0, allocation = 0;
  for (std::int64_t t = 1; t <= trace.horizon; ++t) {
    const auto& rec = trace.at(t, focal);
    blocked += rec.blocked;
    if (rec.won) allocation += rec.duration;
  }
  if (!reusable_bound_holds(shares.weight(focal), shares.total(), blocked, allocation, k_max, trace.horizon, r)) {
    out.pass = false;
    out.first_failure = trace.horizon;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Episodes

EpisodeResult run_episode(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t replication,
                          bool keep_trace) {
  const MechanismConfig mc = scenario.mechanism_config();
  const Mechanism mech(mc);
  const std::size_t n = scenario.agents.size();
  const bool reusable = mc.mode == MechanismMode::reusable;
  const std::int64_t T = scenario.horizon;
  if (T < 1) throw ConfigError("scenario: horizon must be >= 1");

  std::vector<std::optional<PathSampler>> samplers(n);
  std::vector<std::optional<AgentRule>> rules(n);
  std::vector<std::optional<Adversary>> adversaries(n);
  std::vector<ObservableHistory> histories;
  std::vector<Stream> coins;
  std::vector<char> window_guaranteed(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = scenario.agents[i];
    if (a.model)
      samplers[i].emplace(*a.model, Stream(master_seed, replication, i, StreamTag::values));
    if (is_adversary(a.strategy)) {
      adversaries[i].emplace(a.strategy, i, a.target.value_or(0), mech);
      histories.emplace_back(adversaries[i]->observe());
      coins.emplace_back(master_seed, replication, i, StreamTag::adversary_coins);
      const auto& sh = mc.shares;
      window_guaranteed[i] = n == 2 && !reusable &&
                             adversaries[i]->window() <= sh.weight(i) / sh.weight(adversaries[i]->target());
    } else {
      if (!a.model) throw ConfigError("agent " + std::to_string(i) + ": strategy needs a value model");
      rules[i].emplace(a.strategy, *a.model, mc.shares.alpha(i));
      histories.emplace_back(Observe::wins_only);
      coins.emplace_back(master_seed, replication, i, StreamTag::agent_coins);
    }
  }

  EpisodeResult result;
  result.totals.assign(n, {});
  auto& inv = result.invariants;
  if (keep_trace) {
    result.trace.emplace();
    result.trace->horizon = T;
    result.trace->num_agents = n;
    result.trace->records.resize(static_cast<std::size_t>(T) * n);
  }

  MechanismState state = mech.initial_state();
  std::vector<PathStep> steps(n);
  std::vector<AgentRecord> recs(n);
  DurationRequests requests(n);
  std::vector<bool> flags(n);
  std::vector<std::int64_t> held(n, 0);
  std::int64_t idle = 0;

  for (std::int64_t t = 1; t <= T; ++t) {
    for (std::size_t i = 0; i < n; ++i) steps[i] = samplers[i] ? samplers[i]->next() : PathStep{};

    std::optional<std::size_t> winner;
    std::vector<std::size_t> eligible;
    if (state.holding()) {
      const std::size_t holder = *state.holder;
      for (std::size_t i = 0; i < n; ++i) {
        recs[i] = {};
        recs[i].blocked = holder != i;
        recs[i].own_hold = holder == i;
      }
      state = mech.advance_hold(std::move(state));
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (rules[i]) {
          requests[i] = rules[i]->decide(steps[i], coins[i].uniform());
        } else {
          requests[i] = adversaries[i]->decide(histories[i], state);
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        recs[i] = {};
        recs[i].requested = requests[i].has_value();
        recs[i].blocked = mech.blocked_for(state, i, requests, requests[i].value_or(steps[i].duration));
      }
      RoundOutcome out;
      if (reusable) {
        std::tie(state, out) = mech.step_reusable(std::move(state), requests);
      } else {
        for (std::size_t i = 0; i < n; ++i) flags[i] = requests[i].has_value();
        std::tie(state, out) = mech.step_single(std::move(state), flags);
      }
      winner = out.winner;
      eligible = std::move(out.eligible);
      if (winner) {
        auto& w = recs[*winner];
        w.won = true;
        w.utility = steps[*winner].value * (reusable ? static_cast<double>(*requests[*winner]) : 1.0);
        // Adversaries record the granted duration so sum W K = allocation.
        if (!samplers[*winner]) steps[*winner].duration = *requests[*winner];
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!adversaries[i] || !adversaries[i]->record_window_result(winner == i)) continue;
        if (window_guaranteed[i])
          ++inv.window;
        else
          ++inv.window_other;
      }
    }

    std::size_t occupants = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto& rec = recs[i];
      rec.state = static_cast<std::uint32_t>(steps[i].state);
      rec.value = steps[i].value;
      rec.duration = steps[i].duration;
      rec.allocation = state.allocations[i];

      // Per-record identities.
      const bool is_eligible = std::find(eligible.begin(), eligible.end(), i) != eligible.end();
      bool ok = !rec.won || (rec.requested && !rec.blocked);
      ok &= !(rec.requested && !rec.blocked && is_eligible) || rec.won;
      ok &= !rec.own_hold || (!rec.requested && !rec.blocked && !rec.won);
      ok &= rec.utility == (rec.won ? rec.value * (reusable ? static_cast<double>(rec.duration) : 1.0) : 0.0);
      if (!reusable) ok &= rec.won == (rec.requested && !rec.blocked);
      if (!ok) ++inv.identity;

      auto& tot = result.totals[i];
      tot.utility += rec.utility;
      tot.wins += rec.won;
      tot.blocked += rec.blocked;
      tot.requests += rec.requested;
      tot.own_hold += rec.own_hold;
      tot.allocation = rec.allocation;
      if (rec.won || rec.own_hold) {
        ++occupants;
        ++held[i];
      }
      if (adversaries[i]) {
        const std::size_t tgt = adversaries[i]->target();
        histories[i].push(recs[tgt].won, recs[tgt].requested);
      }
      if (!reusable && !single_round_bound_holds(mc.shares.weight(i), mc.shares.total(), tot.blocked, tot.wins))
        ++inv.lemma;
    }
    if (occupants > 1) ++inv.conservation;
    if (occupants == 0) ++idle;

    if (keep_trace)
      for (std::size_t i = 0; i < n; ++i) result.trace->at(t, i) = recs[i];
  }

  std::int64_t total_alloc = 0, total_held = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tot = result.totals[i];
    total_alloc += tot.allocation;
    total_held += held[i];
    if (held[i] > tot.allocation || tot.allocation - held[i] > mc.k_max - 1) ++inv.conservation;
    if (reusable && !reusable_bound_holds(mc.shares.weight(i), mc.shares.total(), tot.blocked, tot.allocation, mc.k_max,
                                          T, mc.r))
      ++inv.lemma;
  }
  if (total_held + idle != T) ++inv.conservation;
  if (total_alloc > T + (reusable ? mc.k_max - 1 : 0)) ++inv.conservation;
  return result;
}

// ---------------------------------------------------------------------------
// Replications

std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

ReplicationSummary run_replications(const Scenario& scenario, std::int64_t reps, std::uint64_t master_seed,
                                    unsigned jobs, const TraceCallback& on_trace) {
  if (reps < 1) throw ConfigError("replications must be >= 1");
  scenario.validate();
  jobs = std::max(1u, jobs);
  const auto count = static_cast<std::size_t>(reps);
  const bool keep = static_cast<bool>(on_trace);
  std::vector<EpisodeResult> results(count);
  std::vector<std::exception_ptr> errors(count);

  // With traces, run in batches so at most `jobs` traces are alive at once.
  const std::size_t batch = keep ? jobs : count;
  for (std::size_t begin = 0; begin < count; begin += batch) {
    const std::size_t end = std::min(count, begin + batch);
    std::atomic<std::size_t> next{begin};
    auto work = [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < end;) {
        try {
          results[k] = run_episode(scenario, master_seed, k, keep);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    };
    const std::size_t threads = std::min<std::size_t>(jobs, end - begin);
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    for (std::size_t k = begin; k < end; ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      if (keep) {
        on_trace(static_cast<std::int64_t>(k), *results[k].trace);
        results[k].trace.reset();
      }
    }
  }

  ReplicationSummary sum;
  sum.replications = reps;
  sum.horizon = scenario.horizon;
  const std::size_t n = scenario.agents.size();
  sum.agents.resize(n);
  const double T = static_cast<double>(scenario.horizon);
  for (std::size_t i = 0; i < n; ++i) {
    auto& a = sum.agents[i];
    std::vector<double> wins, blk, req;
    for (const auto& r : results) {
      a.util_per_rep.push_back(r.totals[i].utility / T);
      wins.push_back(static_cast<double>(r.totals[i].wins));
      blk.push_back(static_cast<double>(r.totals[i].blocked));
      req.push_back(static_cast<double>(r.totals[i].requests));
    }
    std::tie(a.util_mean, a.util_se) = mean_and_se(a.util_per_rep);
    a.wins_mean = mean_and_se(wins).first;
    a.blk_mean = mean_and_se(blk).first;
    a.requests_mean = mean_and_se(req).first;
  }
  for (const auto& r : results) {
    sum.invariants.lemma += r.invariants.lemma;
    sum.invariants.identity += r.invariants.identity;
    sum.invariants.conservation += r.invariants.conservation;
    sum.invariants.window += r.invariants.window;
    sum.invariants.window_other += r.invariants.window_other;
  }
  sum.invariant_violations = sum.invariants.total();
  return sum;
}

// ---------------------------------------------------------------------------
// Trace CSV

void write_trace_header(std::ostream& out) {
  out << "replication,t,agent_id,state,value,duration,requested,blocked,own_hold,won,utility,allocation\n";
}

void write_trace_rows(std::ostream& out, const EpisodeTrace& trace, std::int64_t replication) {
  std::string buf;
  buf.reserve(1 << 16);
  const std::string rep = std::to_string(replication);
  for (std::int64_t t = 1; t <= trace.horizon; ++t) {
    for (std::size_t i = 0; i < trace.num_agents; ++i) {
      const auto& r = trace.at(t, i);
      buf += rep;
      buf += ',';
      buf += std::to_string(t);
      buf += ',';
      buf += std::to_string(i);
      buf += ',';
      buf += std::to_string(r.state);
      buf += ',';
      buf += format_real(r.value);
      buf += ',';
      buf += std::to_string(r.duration);
      buf += r.requested ? ",1" : ",0";
      buf += r.blocked ? ",1" : ",0";
      buf += r.own_hold ? ",1" : ",0";
      buf += r.won ? ",1," : ",0,";
      buf += format_real(r.utility);
      buf += ',';
      buf += std::to_string(r.allocation);
      buf += '\n';
    }
    if (buf.size() > (1 << 16) - 512) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

} // namespace dmmf
