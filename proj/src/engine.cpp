#include "odsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <queue>
#include <tuple>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace odsim {

void FailureModel::validate() const {
    if (kind == Kind::periodic && interval <= 0.0)
        throw std::invalid_argument("FailureModel: periodic interval must be positive");
    if (kind == Kind::mcu_partial && (fraction <= 0.0 || fraction >= 1.0))
        throw std::invalid_argument("FailureModel: mcu_partial fraction must be in (0,1)");
}

std::string FailureModel::describe() const {
    char buf[48];
    switch (kind) {
        case Kind::none: return "none";
        case Kind::periodic:
            std::snprintf(buf, sizeof buf, "periodic:%g", interval);
            return buf;
        default:
            std::snprintf(buf, sizeof buf, "mcu_partial:%g", fraction);
            return buf;
    }
}

FailureModel FailureModel::parse(const std::string& text) {
    FailureModel f;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "none") {
        f.kind = Kind::none;
    } else if (head == "periodic") {
        f.kind = Kind::periodic;
        if (arg.empty()) throw std::invalid_argument("failure 'periodic' needs an interval");
        f.interval = std::stod(arg);
    } else if (head == "mcu_partial") {
        f.kind = Kind::mcu_partial;
        if (arg.empty()) throw std::invalid_argument("failure 'mcu_partial' needs a fraction");
        f.fraction = std::stod(arg);
    } else {
        throw std::invalid_argument("unknown failure model '" + text + "'");
    }
    f.validate();
    return f;
}

SolitonParams TrialConfig::lt_params() const {
    SolitonParams p;
    p.k = file->k;
    p.delta = lt_delta;
    p.c = lt_c > 0.0 ? lt_c : SolitonParams::c_midband(p.k, p.delta);
    return p;
}

void TrialConfig::validate() const {
    if (!graph) throw std::invalid_argument("TrialConfig: graph missing");
    if (!file) throw std::invalid_argument("TrialConfig: file payload missing");
    if (max_sim_time < 0.0) throw std::invalid_argument("TrialConfig: max_sim_time must be >= 0");
    failure.validate();
}

double next_meeting_time(double now, double w, Rng& rng) {
    if (w <= 0.0) throw std::domain_error("next_meeting_time: rate must be positive");
    return now + exp_draw(rng, w);
}

double TrialMetrics::network_finish() const {
    double m = 0.0;
    for (const auto& t : finish_times)
        if (t) m = std::max(m, *t);
    return m;
}

std::size_t TrialMetrics::finished_count() const {
    std::size_t c = 0;
    for (const auto& t : finish_times)
        if (t) ++c;
    return c;
}

std::string TrialMetrics::to_string() const {
    std::ostringstream os;
    os << "meetings=" << meetings_total << " tx=" << transmissions_total
       << " innov=" << innovative_total << " noninnov=" << noninnovative_total
       << " seeded=" << seeded_total << " truncated=" << (truncated ? 1 : 0) << "\n";
    char buf[64];
    for (std::size_t v = 0; v < finish_times.size(); ++v) {
        os << v << " ";
        if (finish_times[v]) {
            std::snprintf(buf, sizeof buf, "%.17g", *finish_times[v]);
            os << buf;
        } else {
            os << "-";
        }
        os << " " << per_node[v].sent << " " << per_node[v].received << " "
           << per_node[v].noninnovative_received << "\n";
    }
    return os.str();
}

namespace {

struct MeetingEvent {
    double t;
    std::uint32_t edge;
};

class EventLogger {
public:
    explicit EventLogger(std::ostream* os) : os_(os) {}
    template <class... Args>
    void line(const char* fmt, Args... args) {
        if (!os_) return;
        char buf[160];
        std::snprintf(buf, sizeof buf, fmt, args...);
        *os_ << buf << "\n";
    }

private:
    std::ostream* os_;
};

}  // namespace

TrialMetrics run_trial(const TrialConfig& cfg) {
    cfg.validate();
    const ContactGraph& g = *cfg.graph;
    const std::size_t n = g.n;
    const std::size_t k = cfg.file->k;
    Rng rng = make_rng(cfg.seed);
    EventLogger log(cfg.event_log);

    auto strategy = make_strategy(cfg.strategy, g, *cfg.file,
                                  cfg.strategy == StrategyKind::erasure
                                      ? cfg.lt_params()
                                      : SolitonParams{k, SolitonParams::c_midband(k, 0.5), 0.5});
    const SeedingPlan plan =
        build_plan(g, cfg.seeding, k, packet_kind_for(cfg.strategy), rng);
    strategy->seed(plan, rng);

    TrialMetrics m;
    m.finish_times.assign(n, std::nullopt);
    m.per_node.assign(n, {});
    m.seeded_total = plan.total();

    std::vector<char> alive(n, 1);
    std::size_t alive_count = n;
    std::size_t finished_alive = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (strategy->finished(v)) {
            m.finish_times[v] = 0.0;
            ++finished_alive;
            log.line("t=0 ev=finish node=%u", v);
        }
    }

    // MCU monitoring for the mcu_partial failure model
    std::vector<std::uint32_t> mcus;
    std::vector<Bitset> mcu_distinct;          // distinct plain ids spread
    std::vector<std::uint64_t> mcu_tx_count;   // coded transmissions spread
    std::size_t mcu_threshold = 0;
    const bool plain_ids = packet_kind_for(cfg.strategy) == PacketKind::plain;
    if (cfg.failure.kind == FailureModel::Kind::mcu_partial) {
        mcus = mcu_per_community(g);
        mcu_distinct.assign(n, Bitset(0));
        for (const auto v : mcus) mcu_distinct[v] = Bitset(k);
        mcu_tx_count.assign(n, 0);
        mcu_threshold = static_cast<std::size_t>(
            std::ceil(cfg.failure.fraction * static_cast<double>(k)));
    }
    std::vector<char> is_mcu(n, 0);
    for (const auto v : mcus) is_mcu[v] = 1;

    // one regenerative exponential clock per edge
    auto cmp = [&](const MeetingEvent& a, const MeetingEvent& b) {
        if (a.t != b.t) return a.t > b.t;
        const auto& ea = g.edges[a.edge];
        const auto& eb = g.edges[b.edge];
        return std::tie(ea.u, ea.v) > std::tie(eb.u, eb.v);
    };
    std::priority_queue<MeetingEvent, std::vector<MeetingEvent>, decltype(cmp)> pq(cmp);
    for (std::uint32_t e = 0; e < g.edges.size(); ++e)
        pq.push({next_meeting_time(0.0, g.edges[e].w, rng), e});

    double next_fail = cfg.failure.kind == FailureModel::Kind::periodic
                           ? cfg.failure.interval
                           : std::numeric_limits<double>::infinity();
    const double horizon =
        cfg.max_sim_time > 0.0 ? cfg.max_sim_time : std::numeric_limits<double>::infinity();

    auto kill = [&](std::uint32_t v, double t, const char* cause) {
        alive[v] = 0;
        --alive_count;
        if (m.finish_times[v]) --finished_alive;
        strategy->on_failure(v);
        log.line("t=%.9g ev=fail node=%u cause=%s", t, v, cause);
    };

    const std::uint64_t qcheck_every =
        std::max<std::uint64_t>(50000, 20 * std::max<std::size_t>(1, g.edges.size()));
    std::uint64_t next_qcheck = qcheck_every;

    bool done = finished_alive == alive_count;
    while (!done) {
        const double next_meet = pq.empty() ? std::numeric_limits<double>::infinity() : pq.top().t;

        if (cfg.failure.kind == FailureModel::Kind::periodic && next_fail <= next_meet) {
            if (next_fail > horizon) {
                m.truncated = true;
                m.truncated_reason = "max_sim_time reached";
                break;
            }
            // periodic failure: a uniformly random alive node departs
            std::vector<std::uint32_t> pool;
            pool.reserve(alive_count);
            for (std::uint32_t v = 0; v < n; ++v)
                if (alive[v]) pool.push_back(v);
            if (pool.empty()) {
                m.truncated = true;
                m.truncated_reason = "population exhausted";
                break;
            }
            kill(pool[uniform_index(rng, pool.size())], next_fail, "periodic");
            next_fail += cfg.failure.interval;
            if (alive_count == 0) {
                m.truncated = true;
                m.truncated_reason = "population exhausted";
                break;
            }
            done = finished_alive == alive_count;
            continue;
        }

        if (pq.empty()) {
            m.truncated = true;
            m.truncated_reason = "no live meeting clocks remain";
            break;
        }
        const auto ev = pq.top();
        pq.pop();
        if (ev.t > horizon) {
            m.truncated = true;
            m.truncated_reason = "max_sim_time reached";
            break;
        }
        const auto& edge = g.edges[ev.edge];
        if (!alive[edge.u] || !alive[edge.v]) continue;  // clock dies with its endpoint

        ++m.meetings_total;
        const std::uint32_t a = edge.u, b = edge.v;
        const bool fa0 = m.finish_times[a].has_value();
        const bool fb0 = m.finish_times[b].has_value();
        const auto outcome = strategy->exchange(a, b, rng);
        log.line("t=%.9g ev=meet u=%u v=%u ab=%d ba=%d", ev.t, a, b,
                 outcome.ab.occurred ? 1 : 0, outcome.ba.occurred ? 1 : 0);

        auto account = [&](const Transfer& tr, std::uint32_t from, std::uint32_t to) {
            if (!tr.occurred) return;
            ++m.transmissions_total;
            ++m.per_node[from].sent;
            ++m.per_node[to].received;
            if (tr.innovative) {
                ++m.innovative_total;
            } else {
                ++m.noninnovative_total;
                ++m.per_node[to].noninnovative_received;
            }
        };
        account(outcome.ab, a, b);
        account(outcome.ba, b, a);

        if (!fa0 && strategy->finished(a)) {
            m.finish_times[a] = ev.t;
            ++finished_alive;
            log.line("t=%.9g ev=finish node=%u", ev.t, a);
        }
        if (!fb0 && strategy->finished(b)) {
            m.finish_times[b] = ev.t;
            ++finished_alive;
            log.line("t=%.9g ev=finish node=%u", ev.t, b);
        }

        // the MCU is pulled out right after spreading its packet quota
        if (mcu_threshold > 0) {
            auto spread = [&](const Transfer& tr, std::uint32_t from) {
                if (!tr.occurred || !is_mcu[from] || !alive[from]) return;
                std::size_t count;
                if (plain_ids && tr.packet_id >= 0) {
                    mcu_distinct[from].set(static_cast<std::size_t>(tr.packet_id));
                    count = mcu_distinct[from].count();
                } else {
                    count = static_cast<std::size_t>(++mcu_tx_count[from]);
                }
                if (count >= mcu_threshold) kill(from, ev.t, "mcu_partial");
            };
            spread(outcome.ab, a);
            spread(outcome.ba, b);
        }

        pq.push({next_meeting_time(ev.t, edge.w, rng), ev.edge});

        done = finished_alive == alive_count;

        if (!done && m.meetings_total >= next_qcheck) {
            next_qcheck += qcheck_every;
            if (!strategy->progress_possible(alive)) {
                m.truncated = true;
                m.truncated_reason = "remaining content unreachable";
                break;
            }
        }
    }

    return m;
}

std::vector<TrialMetrics> run_experiment(const TrialConfig& base, std::size_t n_trials,
                                         unsigned threads) {
    if (n_trials < 1) throw std::invalid_argument("run_experiment: n_trials must be >= 1");
    TrialConfig cfg = base;
    cfg.event_log = nullptr;  // per-trial logs do not interleave across threads

    if (cfg.failure.kind != FailureModel::Kind::none && cfg.max_sim_time == 0.0) {
        TrialConfig pilot = cfg;
        pilot.failure = FailureModel{};
        const auto pm = run_trial(pilot);
        const double finish = pm.network_finish();
        cfg.max_sim_time = finish > 0.0 ? 100.0 * finish : 0.0;
    }

    std::vector<TrialMetrics> out(n_trials);
    unsigned nt = threads ? threads : std::thread::hardware_concurrency();
    nt = std::max(1u, std::min<unsigned>(nt, static_cast<unsigned>(n_trials)));
    if (nt == 1) {
        for (std::size_t i = 0; i < n_trials; ++i) {
            TrialConfig c = cfg;
            c.seed = base.seed + i;
            out[i] = run_trial(c);
        }
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nt);
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            try {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n_trials) return;
                    TrialConfig c = cfg;
                    c.seed = base.seed + i;
                    out[i] = run_trial(c);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace odsim
