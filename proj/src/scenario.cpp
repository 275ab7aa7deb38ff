#include "ffg/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace ffg {

const char* to_string(ProposalModel m)
{
    return m == ProposalModel::Deterministic ? "deterministic" : "stochastic";
}

const char* to_string(StopCondition s)
{
    switch (s) {
    case StopCondition::None: return "none";
    case StopCondition::FirstFinalized: return "first_finalized";
    case StopCondition::AllFinalized: return "all_finalized";
    }
    return "none";
}

std::uint64_t ScenarioConfig::fault_start() const
{
    if (fault_epoch) return *fault_epoch;
    if (partition) return partition->start_epoch;
    std::optional<std::uint64_t> earliest;
    for (const auto& v : validators) {
        std::optional<std::uint64_t> from;
        if (const auto* o = std::get_if<Offline>(&v.strategy)) from = o->from_epoch;
        if (const auto* w = std::get_if<WorstCase>(&v.strategy)) from = w->from_epoch;
        if (from && (!earliest || *from < *earliest)) earliest = from;
    }
    return earliest.value_or(0);
}

void ScenarioConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
    params.validate();
    slashing.validate();
    if (params.epoch_length < 2) fail("params.epoch_length must be >= 2 for simulation");
    if (max_epochs == 0) fail("max_epochs must be >= 1");
    if (!(block_interval_s > 0.0)) fail("block_interval_s must be > 0");
    if (!(worst_case_quantum >= 0.0)) fail("worst_case_quantum must be >= 0");
    if (validators.empty()) fail("at least one validator.<name> entry is required");

    std::set<std::string> names;
    const std::size_t branches = branch_count();
    for (const auto& v : validators) {
        const std::string field = "validator." + v.name;
        if (!names.insert(v.name).second) fail(field + ": duplicate validator name");
        if (!(v.deposit > 0.0) || !std::isfinite(v.deposit)) fail(field + ": deposit must be > 0");
        if (v.branch >= branches) fail(field + ": branch " + std::to_string(v.branch) + " does not exist");
        if (const auto* p = std::get_if<PartitionHonest>(&v.strategy); p && p->branch >= branches)
            fail(field + ": branch " + std::to_string(p->branch) + " does not exist");
        if (const auto* e = std::get_if<Equivocator>(&v.strategy)) {
            if (e->branches.empty()) fail(field + ": equivocator needs branches=");
            for (auto b : e->branches)
                if (b >= branches) fail(field + ": branch " + std::to_string(b) + " does not exist");
        }
    }

    if (partition) {
        if (partition->mining.size() < 2) fail("partition.mining needs at least two shares");
        double sum = 0.0;
        for (double m : partition->mining) {
            if (!(m > 0.0 && m <= 1.0)) fail("partition.mining shares must lie in (0, 1]");
            sum += m;
        }
        if (std::abs(sum - 1.0) > 1e-9) fail("partition.mining shares must sum to 1");
        if (partition->start_epoch == 0) fail("partition.start_epoch must be >= 1");
        if (partition->end_epoch && *partition->end_epoch <= partition->start_epoch)
            fail("partition.end_epoch must be greater than partition.start_epoch");
    }
}

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct LineError {
    std::string prefix;
    [[noreturn]] void operator()(const std::string& msg) const
    {
        throw Error(ErrorCode::ConfigError, prefix + msg);
    }
};

double parse_double(const std::string& key, const std::string& value, const LineError& fail)
{
    try {
        std::size_t used = 0;
        double d = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(d)) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        fail(key + ": expected a number, got '" + value + "'");
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value, const LineError& fail)
{
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        fail(key + ": expected a non-negative integer, got '" + value + "'");
    return out;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

std::vector<std::uint32_t> parse_branches(const std::string& key, const std::string& value, const LineError& fail)
{
    std::vector<std::uint32_t> out;
    for (const auto& item : split(value, ',')) {
        std::uint64_t b = parse_uint(key, item, fail);
        if (b > 0xFFFFFFFFULL) fail(key + ": branch index too large");
        out.push_back(static_cast<std::uint32_t>(b));
    }
    return out;
}

void parse_validator(ScenarioConfig& cfg, const std::string& name, const std::string& value, const LineError& fail)
{
    const std::string field = "validator." + name;
    if (name.empty()) fail("validator entry needs a name: validator.<name> = ...");
    std::map<std::string, std::string> opts;
    std::istringstream in(value);
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0) fail(field + ": expected key=value, got '" + token + "'");
        std::string k = token.substr(0, eq);
        if (!opts.emplace(k, token.substr(eq + 1)).second) fail(field + ": repeated option '" + k + "'");
    }
    static const std::set<std::string> known = {"deposit", "strategy", "from", "branch", "branches", "count"};
    for (const auto& [k, v] : opts)
        if (!known.count(k)) fail(field + ": unknown option '" + k + "'");
    if (!opts.count("deposit")) fail(field + ": deposit= is required");

    ValidatorSpec spec;
    spec.name = name;
    spec.deposit = parse_double(field + ".deposit", opts["deposit"], fail);
    if (opts.count("branch")) {
        auto b = parse_branches(field + ".branch", opts["branch"], fail);
        if (b.size() != 1) fail(field + ".branch: expected one branch index");
        spec.branch = b.front();
    }
    std::string kind = opts.count("strategy") ? opts["strategy"] : "honest";
    std::uint64_t from = opts.count("from") ? parse_uint(field + ".from", opts["from"], fail) : 0;
    auto reject = [&](const char* opt) {
        if (opts.count(opt)) fail(field + ": option '" + opt + "' does not apply to strategy " + kind);
    };
    if (kind == "honest") {
        reject("from");
        reject("branches");
        spec.strategy = Honest{};
    } else if (kind == "offline") {
        reject("branches");
        spec.strategy = Offline{from};
    } else if (kind == "worst_case") {
        reject("branches");
        spec.strategy = WorstCase{from};
    } else if (kind == "equivocator") {
        reject("from");
        if (!opts.count("branches")) fail(field + ": equivocator needs branches=");
        spec.strategy = Equivocator{parse_branches(field + ".branches", opts["branches"], fail)};
    } else if (kind == "partition_honest") {
        reject("from");
        reject("branches");
        spec.strategy = PartitionHonest{spec.branch};
    } else {
        fail(field + ".strategy: unknown strategy '" + kind +
             "' (honest, offline, worst_case, equivocator, partition_honest)");
    }

    std::uint64_t count = opts.count("count") ? parse_uint(field + ".count", opts["count"], fail) : 1;
    if (count == 0) fail(field + ".count must be >= 1");
    if (!opts.count("count")) {
        cfg.validators.push_back(spec);
        return;
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        ValidatorSpec copy = spec;
        copy.name = name + std::to_string(i);
        cfg.validators.push_back(copy);
    }
}

} // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::string& origin)
{
    ScenarioConfig cfg;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        LineError fail{origin + ":" + std::to_string(lineno) + ": "};
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty()) fail(key + ": missing value");
        if (!seen.insert(key).second) fail(key + ": duplicate key");

        auto partition = [&]() -> PartitionSpec& {
            if (!cfg.partition) cfg.partition.emplace();
            return *cfg.partition;
        };

        if (key.rfind("validator.", 0) == 0) {
            parse_validator(cfg, key.substr(10), value, fail);
        } else if (key == "seed") {
            cfg.seed = parse_uint(key, value, fail);
        } else if (key == "max_epochs") {
            cfg.max_epochs = parse_uint(key, value, fail);
        } else if (key == "fault_epoch") {
            cfg.fault_epoch = parse_uint(key, value, fail);
        } else if (key == "block_interval_s") {
            cfg.block_interval_s = parse_double(key, value, fail);
        } else if (key == "worst_case_quantum") {
            cfg.worst_case_quantum = parse_double(key, value, fail);
        } else if (key == "proposal_model") {
            if (value == "deterministic") cfg.proposal_model = ProposalModel::Deterministic;
            else if (value == "stochastic") cfg.proposal_model = ProposalModel::Stochastic;
            else fail(key + ": expected deterministic or stochastic, got '" + value + "'");
        } else if (key == "stop") {
            if (value == "none") cfg.stop = StopCondition::None;
            else if (value == "first_finalized") cfg.stop = StopCondition::FirstFinalized;
            else if (value == "all_finalized") cfg.stop = StopCondition::AllFinalized;
            else fail(key + ": expected none, first_finalized or all_finalized, got '" + value + "'");
        } else if (key == "params.epoch_length") {
            cfg.params.epoch_length = parse_uint(key, value, fail);
        } else if (key == "params.gamma") {
            cfg.params.gamma = parse_double(key, value, fail);
        } else if (key == "params.beta") {
            cfg.params.beta = parse_double(key, value, fail);
        } else if (key == "params.p") {
            cfg.params.p = parse_double(key, value, fail);
        } else if (key == "params.finality_threshold") {
            cfg.params.finality_threshold = parse_double(key, value, fail);
        } else if (key == "params.min_fork_choice_deposit") {
            cfg.params.min_fork_choice_deposit = parse_double(key, value, fail);
        } else if (key == "slashing.window_epochs") {
            cfg.slashing.window_epochs = parse_uint(key, value, fail);
        } else if (key == "slashing.fee_fraction") {
            cfg.slashing.fee_fraction = parse_double(key, value, fail);
        } else if (key == "slashing.severity_multiplier") {
            cfg.slashing.severity_multiplier = parse_double(key, value, fail);
        } else if (key == "partition.start_epoch") {
            partition().start_epoch = parse_uint(key, value, fail);
        } else if (key == "partition.end_epoch") {
            if (value == "never") partition().end_epoch.reset();
            else partition().end_epoch = parse_uint(key, value, fail);
        } else if (key == "partition.mining") {
            auto& m = partition().mining;
            for (const auto& item : split(value, ',')) m.push_back(parse_double(key, item, fail));
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (cfg.partition && cfg.partition->mining.empty())
        throw Error(ErrorCode::ConfigError, origin + ": partition.mining is required when partition.* is set");
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw Error(e.code(), origin + ": " + e.what());
    }
    return cfg;
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin)
{
    std::istringstream in(text);
    return parse_scenario(in, origin);
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open scenario file");
    return parse_scenario(in, path);
}

namespace {

std::string num(double d)
{
    std::ostringstream out;
    out << std::setprecision(17) << d;
    return out.str();
}

std::string join(const std::vector<std::uint32_t>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

} // namespace

std::string format_scenario(const ScenarioConfig& c)
{
    std::ostringstream out;
    out << "seed = " << c.seed << "\n";
    out << "max_epochs = " << c.max_epochs << "\n";
    out << "proposal_model = " << to_string(c.proposal_model) << "\n";
    out << "stop = " << to_string(c.stop) << "\n";
    if (c.fault_epoch) out << "fault_epoch = " << *c.fault_epoch << "\n";
    out << "block_interval_s = " << num(c.block_interval_s) << "\n";
    out << "worst_case_quantum = " << num(c.worst_case_quantum) << "\n";
    out << "params.epoch_length = " << c.params.epoch_length << "\n";
    out << "params.gamma = " << num(c.params.gamma) << "\n";
    out << "params.beta = " << num(c.params.beta) << "\n";
    out << "params.p = " << num(c.params.p) << "\n";
    out << "params.finality_threshold = " << num(c.params.finality_threshold) << "\n";
    out << "params.min_fork_choice_deposit = " << num(c.params.min_fork_choice_deposit) << "\n";
    out << "slashing.window_epochs = " << c.slashing.window_epochs << "\n";
    out << "slashing.fee_fraction = " << num(c.slashing.fee_fraction) << "\n";
    out << "slashing.severity_multiplier = " << num(c.slashing.severity_multiplier) << "\n";
    if (c.partition) {
        out << "partition.start_epoch = " << c.partition->start_epoch << "\n";
        out << "partition.end_epoch = "
            << (c.partition->end_epoch ? std::to_string(*c.partition->end_epoch) : "never") << "\n";
        out << "partition.mining = ";
        for (std::size_t i = 0; i < c.partition->mining.size(); ++i)
            out << (i ? ", " : "") << num(c.partition->mining[i]);
        out << "\n";
    }
    for (const auto& v : c.validators) {
        out << "validator." << v.name << " = deposit=" << num(v.deposit);
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Honest>) out << " strategy=honest";
                if constexpr (std::is_same_v<T, Offline>) out << " strategy=offline from=" << s.from_epoch;
                if constexpr (std::is_same_v<T, WorstCase>) out << " strategy=worst_case from=" << s.from_epoch;
                if constexpr (std::is_same_v<T, Equivocator>)
                    out << " strategy=equivocator branches=" << join(s.branches);
                if constexpr (std::is_same_v<T, PartitionHonest>) out << " strategy=partition_honest";
            },
            v.strategy);
        if (v.branch != 0 || std::holds_alternative<PartitionHonest>(v.strategy)) out << " branch=" << v.branch;
        out << "\n";
    }
    return out.str();
}

ScenarioConfig offline_scenario(double offline_share, double d0, std::uint64_t from_epoch,
                                std::uint64_t max_epochs, const ProtocolParams& params)
{
    ScenarioConfig c;
    c.params = params;
    c.max_epochs = max_epochs;
    c.stop = StopCondition::FirstFinalized;
    c.fault_epoch = from_epoch;
    c.validators.push_back({"honest", (1.0 - offline_share) * d0, Honest{}, 0});
    c.validators.push_back({"offline", offline_share * d0, Offline{from_epoch}, 0});
    return c;
}

ScenarioConfig worst_case_scenario(double alpha0, double d0, std::size_t pool, std::uint64_t from_epoch,
                                   std::uint64_t max_epochs, const ProtocolParams& params)
{
    ScenarioConfig c;
    c.params = params;
    c.max_epochs = max_epochs;
    c.stop = StopCondition::FirstFinalized;
    c.fault_epoch = from_epoch;
    c.validators.push_back({"honest", alpha0 * d0, Honest{}, 0});
    for (std::size_t i = 0; i < pool; ++i)
        c.validators.push_back(
            {"adv" + std::to_string(i), (1.0 - alpha0) * d0 / static_cast<double>(pool), WorstCase{from_epoch}, 0});
    return c;
}

ScenarioConfig partition_scenario(double alpha, double mu, double d0, std::uint64_t start_epoch,
                                  std::uint64_t max_epochs, std::uint64_t seed, ProposalModel model,
                                  const ProtocolParams& params)
{
    ScenarioConfig c;
    c.params = params;
    c.max_epochs = max_epochs;
    c.seed = seed;
    c.proposal_model = model;
    c.stop = StopCondition::AllFinalized;
    c.partition = PartitionSpec{start_epoch, std::nullopt, {mu, 1.0 - mu}};
    c.validators.push_back({"a", alpha * d0, PartitionHonest{0}, 0});
    c.validators.push_back({"b", (1.0 - alpha) * d0, PartitionHonest{1}, 1});
    return c;
}

} // namespace ffg
