#include "sinklab/cli/config.hpp"

#include "sinklab/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace sinklab::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& raw)
{
    const std::string text = trim(raw);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last)
        throw ValidationError(field, "expected a number, got '" + text + "'");
    return value;
}

std::int64_t parse_int(const std::string& field, const std::string& raw)
{
    const std::string text = trim(raw);
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last)
        throw ValidationError(field, "expected an integer, got '" + text + "'");
    return value;
}

std::uint64_t parse_unsigned(const std::string& field, const std::string& raw)
{
    const std::string text = trim(raw);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ValidationError(field, "expected a non-negative integer, got '" + text + "'");
    return value;
}

int parse_small_int(const std::string& field, const std::string& raw)
{
    const std::int64_t v = parse_int(field, raw);
    if (v < -1000000000 || v > 1000000000) throw ValidationError(field, "integer out of range");
    return static_cast<int>(v);
}

std::string format_list(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_double(values[i]);
    }
    return out;
}

const std::map<std::string, std::string>& field_names()
{
    static const std::map<std::string, std::string> names{
        {"D", "model.D"},           {"omega", "model.omega"},
        {"sigma", "model.sigma"},   {"x0", "model.x0"},
        {"alpha0", "sink.alpha0"},  {"alpha1", "sink.alpha1"},
        {"alpha", "sink.alpha"},    {"t_on", "sink.t_on"},
        {"beta", "sink.beta"},      {"alpha_decay", "sink.alpha_decay"},
        {"dx", "oracle.dx"},        {"dt", "oracle.dt"},
        {"nx", "oracle.dx"},        {"half_length", "oracle.half_length"},
        {"delta_width", "oracle.delta_width"},
        {"talbot_nodes", "ilt.talbot_nodes"},
        {"stehfest_terms", "ilt.stehfest_terms"},
    };
    return names;
}

bool is_numeric_key(const RunConfig& base, const std::string& section, const std::string& key)
{
    if (section == "sink" && key == "law") return false;
    if (section == "ilt" && key == "method") return false;
    if (section == "output") return false;
    RunConfig probe = base;
    try {
        apply_setting(probe, section, key, "1");
    } catch (const ValidationError&) {
        return false;
    }
    return true;
}

} // namespace

std::string format_double(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<double> parse_list(const std::string& field, const std::string& text)
{
    const std::string body = trim(text);
    std::vector<double> out;
    if (body.rfind("linspace(", 0) == 0) {
        if (body.back() != ')') throw ValidationError(field, "unterminated linspace(...)");
        const std::vector<double> args =
            parse_list(field, body.substr(9, body.size() - 10));
        if (args.size() != 3) throw ValidationError(field, "linspace takes (start, stop, count)");
        const double n = args[2];
        if (!(n >= 1.0) || n != std::floor(n) || n > 1e7)
            throw ValidationError(field, "linspace count must be a positive integer");
        const auto count = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < count; ++i) {
            double v = count == 1 ? args[0]
                                  : args[0] + (args[1] - args[0]) * static_cast<double>(i) /
                                                  static_cast<double>(count - 1);
            out.push_back(v);
        }
        if (count > 1) out.back() = args[1];
        return out;
    }
    if (body.empty()) return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(field, item));
    return out;
}

void apply_setting(RunConfig& c, const std::string& section, const std::string& key,
                   const std::string& raw)
{
    const std::string field = section + "." + key;
    const std::string value = trim(raw);
    auto num = [&] { return parse_double(field, value); };
    auto integer = [&] { return parse_small_int(field, value); };

    if (section == "model") {
        if (key == "D") return void(c.D = num());
        if (key == "omega") return void(c.omega = num());
        if (key == "sigma") return void(c.sigma = integer());
        if (key == "x0") return void(c.x0 = num());
    } else if (section == "sink") {
        if (key == "law") return void(c.law = value);
        if (key == "alpha0") return void(c.alpha0 = num());
        if (key == "alpha1") return void(c.alpha1 = num());
        if (key == "alpha") return void(c.alpha = num());
        if (key == "t_on") {
            if (value == "auto") c.t_on.reset();
            else c.t_on = num();
            return;
        }
        if (key == "beta") return void(c.beta = num());
        if (key == "alpha_decay") return void(c.alpha_decay = num());
    } else if (section == "output") {
        if (key == "x") return void(c.x = parse_list(field, value));
        if (key == "t") return void(c.t = parse_list(field, value));
        if (key == "dir") return void(c.out_dir = value);
    } else if (section == "ilt") {
        if (key == "method") {
            try {
                c.ilt.method = parse_ilt_method(value);
            } catch (const ValidationError& e) {
                throw ValidationError(field, e.what());
            }
            return;
        }
        if (key == "talbot_nodes") return void(c.ilt.talbot_nodes = integer());
        if (key == "stehfest_terms") return void(c.ilt.stehfest_terms = integer());
        if (key == "agreement_tol") return void(c.ilt.agreement_tol = num());
    } else if (section == "ode") {
        if (key == "s_max_factor") return void(c.closure.ode.s_max_factor = num());
        if (key == "tol") return void(c.closure.ode.tol = num());
        if (key == "max_steps") return void(c.closure.ode.max_steps = integer());
    } else if (section == "series") {
        if (key == "depth_max") return void(c.closure.series.depth_max = integer());
        if (key == "tail_tol") return void(c.closure.series.tail_tol = num());
        if (key == "fixed_depth") {
            if (value == "auto") c.closure.series.fixed_depth.reset();
            else c.closure.series.fixed_depth = integer();
            return;
        }
    } else if (section == "oracle") {
        if (key == "dx") return void(c.oracle.dx = num());
        if (key == "dt") return void(c.oracle.dt = num());
        if (key == "half_length") return void(c.oracle.half_length = num());
        if (key == "delta_width") return void(c.oracle.delta_width = num());
        if (key == "volterra_dt") return void(c.oracle.volterra_dt = num());
        if (key == "mc_paths") return void(c.oracle.mc_paths = parse_int(field, value));
        if (key == "mc_dt") return void(c.oracle.mc_dt = num());
        if (key == "mc_delta_width") return void(c.oracle.mc_delta_width = num());
        if (key == "mc_shards") return void(c.oracle.mc_shards = integer());
    } else if (section == "compare") {
        if (key == "tolerance") return void(c.compare_tol = num());
    } else if (section == "run") {
        if (key == "seed") return void(c.seed = parse_unsigned(field, value));
    } else if (section == "sweep") {
        if (key == "route") return void(c.sweep_route = value);
        const auto dot = key.find('.');
        if (dot == std::string::npos)
            throw ValidationError(field, "sweep axes are written as section.key = list");
        const std::string s2 = key.substr(0, dot);
        const std::string k2 = key.substr(dot + 1);
        if (!is_numeric_key(c, s2, k2))
            throw ValidationError(field, "'" + key + "' is not a numeric setting");
        std::vector<double> values = parse_list(field, value);
        for (auto& axis : c.sweep)
            if (axis.key == key) return void(axis.values = std::move(values));
        c.sweep.push_back({key, std::move(values)});
        return;
    }
    throw ValidationError(field, "unknown setting");
}

void apply_override(RunConfig& config, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ValidationError("--set", "expected section.key=value, got '" + assignment + "'");
    const std::string path = trim(assignment.substr(0, eq));
    const auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
        throw ValidationError("--set", "expected section.key=value, got '" + assignment + "'");
    apply_setting(config, path.substr(0, dot), path.substr(dot + 1), assignment.substr(eq + 1));
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides)
{
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError("config", std::string("malformed INI: ") + e.message() +
                                            " (line " + std::to_string(e.line()) + ")");
    }
    RunConfig config;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty())
            throw ValidationError(section, "top-level keys must live in a [section]");
        for (const auto& [key, node] : body)
            apply_setting(config, section, key, node.data());
    }
    for (const auto& o : overrides) apply_override(config, o);
    return config;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("--config", "cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), overrides);
}

std::string serialize(const RunConfig& c)
{
    std::ostringstream out;
    auto kv = [&](const char* k, const std::string& v) { out << k << " = " << v << "\n"; };
    auto num = [&](const char* k, double v) { kv(k, format_double(v)); };

    out << "[model]\n";
    num("D", c.D);
    num("omega", c.omega);
    kv("sigma", std::to_string(c.sigma));
    num("x0", c.x0);

    out << "\n[sink]\n";
    kv("law", c.law);
    num("alpha0", c.alpha0);
    num("alpha1", c.alpha1);
    num("alpha", c.alpha);
    kv("t_on", c.t_on ? format_double(*c.t_on) : "auto");
    num("beta", c.beta);
    num("alpha_decay", c.alpha_decay);

    out << "\n[output]\n";
    kv("x", format_list(c.x));
    kv("t", format_list(c.t));
    if (!c.out_dir.empty()) kv("dir", c.out_dir);

    out << "\n[ilt]\n";
    kv("method", to_string(c.ilt.method));
    kv("talbot_nodes", std::to_string(c.ilt.talbot_nodes));
    kv("stehfest_terms", std::to_string(c.ilt.stehfest_terms));
    num("agreement_tol", c.ilt.agreement_tol);

    out << "\n[ode]\n";
    num("s_max_factor", c.closure.ode.s_max_factor);
    num("tol", c.closure.ode.tol);
    kv("max_steps", std::to_string(c.closure.ode.max_steps));

    out << "\n[series]\n";
    kv("depth_max", std::to_string(c.closure.series.depth_max));
    num("tail_tol", c.closure.series.tail_tol);
    kv("fixed_depth",
       c.closure.series.fixed_depth ? std::to_string(*c.closure.series.fixed_depth) : "auto");

    out << "\n[oracle]\n";
    num("dx", c.oracle.dx);
    num("dt", c.oracle.dt);
    num("half_length", c.oracle.half_length);
    num("delta_width", c.oracle.delta_width);
    num("volterra_dt", c.oracle.volterra_dt);
    kv("mc_paths", std::to_string(c.oracle.mc_paths));
    num("mc_dt", c.oracle.mc_dt);
    num("mc_delta_width", c.oracle.mc_delta_width);
    kv("mc_shards", std::to_string(c.oracle.mc_shards));

    out << "\n[compare]\n";
    num("tolerance", c.compare_tol);

    out << "\n[run]\n";
    kv("seed", std::to_string(c.seed));

    out << "\n[sweep]\n";
    kv("route", c.sweep_route);
    for (const auto& axis : c.sweep) out << axis.key << " = " << format_list(axis.values) << "\n";
    return out.str();
}

ModelParams model_params(const RunConfig& c)
{
    return ModelParams(c.D, c.omega, parse_sink_sign(c.sigma));
}

SinkSpec sink_spec(const RunConfig& c)
{
    if (c.law == "none") return NoSink{};
    if (c.law == "constant") return ConstantSink{c.alpha0};
    if (c.law == "linear") return LinearSink{c.alpha1};
    if (c.law == "inverse") {
        double t_on = c.t_on ? *c.t_on : default_activation_time(model_params(c));
        return InverseTimeSink{c.alpha, t_on};
    }
    if (c.law == "expdecay") return ExpDecaySink{c.beta, c.alpha_decay};
    throw ValidationError("sink.law", "unknown law '" + c.law +
                                          "' (none, constant, linear, inverse, expdecay)");
}

nlohmann::json to_json(const RunConfig& c)
{
    using nlohmann::json;
    json sink = {{"law", c.law}};
    if (c.law == "constant") sink["alpha0"] = c.alpha0;
    if (c.law == "linear") sink["alpha1"] = c.alpha1;
    if (c.law == "inverse") {
        sink["alpha"] = c.alpha;
        sink["t_on"] = c.t_on ? *c.t_on : default_activation_time(model_params(c));
        sink["t_on_defaulted"] = !c.t_on.has_value();
    }
    if (c.law == "expdecay") {
        sink["beta"] = c.beta;
        sink["alpha_decay"] = c.alpha_decay;
    }
    json sweep = json::array();
    for (const auto& a : c.sweep) sweep.push_back({{"key", a.key}, {"values", a.values}});
    return json{
        {"model", {{"D", c.D}, {"omega", c.omega}, {"sigma", c.sigma}, {"x0", c.x0}}},
        {"sink", sink},
        {"output", {{"x", c.x}, {"t", c.t}, {"dir", c.out_dir}}},
        {"ilt",
         {{"method", to_string(c.ilt.method)},
          {"talbot_nodes", c.ilt.talbot_nodes},
          {"stehfest_terms", c.ilt.stehfest_terms},
          {"agreement_tol", c.ilt.agreement_tol}}},
        {"ode",
         {{"s_max_factor", c.closure.ode.s_max_factor},
          {"tol", c.closure.ode.tol},
          {"max_steps", c.closure.ode.max_steps}}},
        {"series",
         {{"depth_max", c.closure.series.depth_max},
          {"tail_tol", c.closure.series.tail_tol},
          {"fixed_depth", c.closure.series.fixed_depth ? json(*c.closure.series.fixed_depth)
                                                       : json("auto")}}},
        {"oracle",
         {{"dx", c.oracle.dx},
          {"dt", c.oracle.dt},
          {"half_length", c.oracle.half_length},
          {"delta_width", c.oracle.delta_width},
          {"volterra_dt", c.oracle.volterra_dt},
          {"mc_paths", c.oracle.mc_paths},
          {"mc_dt", c.oracle.mc_dt},
          {"mc_delta_width", c.oracle.mc_delta_width},
          {"mc_shards", c.oracle.mc_shards}}},
        {"compare", {{"tolerance", c.compare_tol}}},
        {"run", {{"seed", c.seed}}},
        {"sweep", {{"route", c.sweep_route}, {"axes", sweep}}},
    };
}

void validate(const RunConfig& c)
{
    try {
        const ModelParams params = model_params(c);
        const SinkSpec sink = sink_spec(c);
        validate(sink);
        validate_source(c.x0);
        if (const auto* l = std::get_if<LinearSink>(&sink); l && params.sigma() * l->alpha1 > 0.0)
            throw ValidationError("alpha1",
                                  "sigma * alpha1 > 0 is an unbounded gain without a Laplace transform");
        if (std::holds_alternative<InverseTimeSink>(sink) && !is_inert(sink)) {
            if (c.x0 == 0.0)
                throw ValidationError("x0", "inverse-time law with the source on the sink diverges");
            if (params.sign() != SinkSign::absorbing)
                throw ValidationError("sigma", "inverse-time law supports sigma = -1 only");
        }
    } catch (const ValidationError& e) {
        const auto& names = field_names();
        auto it = names.find(e.field());
        if (it == names.end()) throw;
        std::string msg = e.what();
        const std::string prefix = e.field() + ": ";
        if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
        throw ValidationError(it->second, msg);
    }

    c.ilt.validate();
    if (!(c.closure.ode.s_max_factor > 0.0))
        throw ValidationError("ode.s_max_factor", "must be > 0");
    if (!(c.closure.ode.tol > 0.0) || !(c.closure.ode.tol < 1.0))
        throw ValidationError("ode.tol", "must lie in (0, 1)");
    if (c.closure.ode.max_steps < 1) throw ValidationError("ode.max_steps", "must be >= 1");
    if (c.closure.series.depth_max < 1) throw ValidationError("series.depth_max", "must be >= 1");
    if (!(c.closure.series.tail_tol > 0.0)) throw ValidationError("series.tail_tol", "must be > 0");
    if (c.closure.series.fixed_depth && *c.closure.series.fixed_depth < 0)
        throw ValidationError("series.fixed_depth", "must be >= 0");

    if (c.x.empty()) throw ValidationError("output.x", "needs at least one point");
    if (c.t.empty()) throw ValidationError("output.t", "needs at least one time");
    for (double v : c.x)
        if (!std::isfinite(v)) throw ValidationError("output.x", "values must be finite");
    for (double v : c.t)
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("output.t", "times must be > 0");

    auto positive = [](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be > 0");
    };
    positive("oracle.dx", c.oracle.dx);
    positive("oracle.dt", c.oracle.dt);
    positive("oracle.volterra_dt", c.oracle.volterra_dt);
    positive("oracle.mc_dt", c.oracle.mc_dt);
    positive("oracle.mc_delta_width", c.oracle.mc_delta_width);
    if (!(c.oracle.half_length >= 0.0)) throw ValidationError("oracle.half_length", "must be >= 0");
    if (!(c.oracle.delta_width >= 0.0)) throw ValidationError("oracle.delta_width", "must be >= 0");
    if (c.oracle.mc_paths < 0) throw ValidationError("oracle.mc_paths", "must be >= 0");
    if (c.oracle.mc_shards < 1) throw ValidationError("oracle.mc_shards", "must be >= 1");
    positive("compare.tolerance", c.compare_tol);
    if (c.sweep_route != "analytic" && c.sweep_route != "cn")
        throw ValidationError("sweep.route", "must be analytic or cn");
    for (const auto& a : c.sweep)
        for (double v : a.values)
            if (!std::isfinite(v)) throw ValidationError("sweep." + a.key, "values must be finite");
}

} // namespace sinklab::cli
