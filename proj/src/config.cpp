#include "subgoal/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace subgoal {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Drops a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

struct Value {
    std::string_view raw;
    std::string key;
    int line;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("config line " + std::to_string(line) + ": " + key + ": " + what);
    }

    std::string str() const {
        if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') fail("expected a quoted string");
        return std::string(raw.substr(1, raw.size() - 2));
    }

    template <class T>
    T number() const {
        T v{};
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (ec != std::errc{} || ptr != raw.data() + raw.size()) fail("expected a number, got '" + std::string(raw) + "'");
        return v;
    }

    bool boolean() const {
        if (raw == "true") return true;
        if (raw == "false") return false;
        fail("expected true or false");
    }
};

ScheduleUnit unit(const Value& v) {
    const auto s = v.str();
    if (s == "episode") return ScheduleUnit::Episode;
    if (s == "step") return ScheduleUnit::Step;
    v.fail("expected episode or step");
}

void assign(RunConfig& c, const Value& v) {
    const std::string& k = v.key;
    if (k == "layout") c.layout = v.str();
    else if (k == "p_fail") c.p_fail = v.number<double>();
    else if (k == "episodes") c.episodes = v.number<int>();
    else if (k == "seeds") c.seeds = v.number<int>();
    else if (k == "seed") c.base_seed = v.number<std::uint64_t>();
    else if (k == "radius" || k == "L") c.radius = v.number<double>();
    else if (k == "metric") {
        try {
            c.metric = parse_metric(v.str());
        } catch (const std::invalid_argument& e) {
            v.fail(e.what());
        }
    } else if (k == "start") {
        const auto s = v.str();
        if (s == "top_left") c.start = StartRule::FixedTopLeft;
        else if (s == "random_corner") c.start = StartRule::RandomCorner;
        else if (s == "layout") c.start.reset();
        else v.fail("expected top_left, random_corner or layout");
    } else if (k == "out") c.out_dir = v.str();
    else if (k == "trace") c.trace = v.boolean();
    else if (k == "detect_every") c.detect_every = v.number<int>();
    else if (k == "schedule_unit") c.lambda_unit = c.epsilon_unit = unit(v);
    else if (k == "lambda_unit") c.lambda_unit = unit(v);
    else if (k == "epsilon_unit") c.epsilon_unit = unit(v);
    else if (k == "lambda_form") {
        const auto s = v.str();
        if (s == "geometric") c.schedules.lambda_form = DecayForm::Geometric;
        else if (s == "inverse") c.schedules.lambda_form = DecayForm::Inverse;
        else v.fail("expected geometric or inverse");
    } else if (k == "alpha") c.fe.alpha = v.number<double>();
    else if (k == "beta") c.fe.beta = v.number<double>();
    else if (k == "nu") c.fe.nu = v.number<double>();
    else if (k == "prob_floor") c.fe.prob_floor = v.number<double>();
    else if (k == "behavior") {
        const auto b = v.str();
        if (b == "main") c.fe.behavior = BehaviorSource::Main;
        else if (b == "space") c.fe.behavior = BehaviorSource::Space;
        else v.fail("expected main or space");
    } else if (k == "gamma") c.schedules.gamma = v.number<double>();
    else if (k == "lambda0") c.schedules.lambda0 = v.number<double>();
    else if (k == "lambda_decay") c.schedules.lambda_decay = v.number<double>();
    else if (k == "eps0") c.schedules.eps0 = v.number<double>();
    else if (k == "eps_decay") c.schedules.eps_decay = v.number<double>();
    else v.fail("unknown key");
}

std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, ptr);
    // Keep floats recognisable as floats.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

const char* unit_name(ScheduleUnit u) { return u == ScheduleUnit::Episode ? "episode" : "step"; }

}  // namespace

void RunConfig::validate() const {
    if (!(p_fail >= 0.0 && p_fail <= 1.0)) throw ConfigError("p_fail must lie in [0, 1]");
    if (episodes < 1) throw ConfigError("episodes must be >= 1");
    if (seeds < 1) throw ConfigError("seeds must be >= 1");
    if (detect_every < 1) throw ConfigError("detect_every must be >= 1");
    if (!(radius > 0.0)) throw ConfigError("radius must be positive");
    try {
        fe.validate();
        schedules.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "free_energy" && section != "schedules" && section != "run")
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        assign(c, Value{trim(line.substr(eq + 1)), std::string(trim(line.substr(0, eq))), line_no});
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_toml(const RunConfig& c) {
    std::ostringstream out;
    out << "layout = \"" << c.layout << "\"\n"
        << "p_fail = " << num(c.p_fail) << '\n'
        << "episodes = " << c.episodes << '\n'
        << "seeds = " << c.seeds << '\n'
        << "seed = " << c.base_seed << '\n'
        << "radius = " << num(c.radius) << '\n'
        << "metric = \"" << to_string(c.metric) << "\"\n"
        << "start = \""
        << (!c.start ? "layout" : *c.start == StartRule::FixedTopLeft ? "top_left" : "random_corner") << "\"\n"
        << "out = \"" << c.out_dir << "\"\n"
        << "trace = " << (c.trace ? "true" : "false") << '\n'
        << "detect_every = " << c.detect_every << '\n'
        << "lambda_unit = \"" << unit_name(c.lambda_unit) << "\"\n"
        << "epsilon_unit = \"" << unit_name(c.epsilon_unit) << "\"\n"
        << "\n[free_energy]\n"
        << "alpha = " << num(c.fe.alpha) << '\n'
        << "beta = " << num(c.fe.beta) << '\n'
        << "nu = " << num(c.fe.nu) << '\n'
        << "prob_floor = " << num(c.fe.prob_floor) << '\n'
        << "behavior = \"" << (c.fe.behavior == BehaviorSource::Main ? "main" : "space") << "\"\n"
        << "\n[schedules]\n"
        << "gamma = " << num(c.schedules.gamma) << '\n'
        << "lambda0 = " << num(c.schedules.lambda0) << '\n'
        << "lambda_decay = " << num(c.schedules.lambda_decay) << '\n'
        << "eps0 = " << num(c.schedules.eps0) << '\n'
        << "eps_decay = " << num(c.schedules.eps_decay) << '\n'
        << "lambda_form = \"" << (c.schedules.lambda_form == DecayForm::Geometric ? "geometric" : "inverse") << "\"\n";
    return out.str();
}

}  // namespace subgoal
