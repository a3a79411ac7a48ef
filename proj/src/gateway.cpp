#include "ppmchart/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"

#include "ppmchart/patterns.hpp"
#include "ppmchart/render.hpp"
#include "text_util.hpp"

namespace ppmchart {

// ---------------------------------------------------------------------------
// SessionStore

std::string SessionStore::add(Session session) {
    auto entry = std::make_shared<StoredSession>();
    entry->final_model = final_model(session);
    entry->diagnostics = validate_session(session);

    std::unique_lock lock(mutex_);
    if (session.session_id.empty()) {
        do {
            session.session_id = "session-" + std::to_string(++generated_);
        } while (entries_.contains(session.session_id));
    }
    const auto id = session.session_id;
    entry->session = std::move(session);
    if (!entries_.contains(id)) order_.push_back(id);
    entries_.insert_or_assign(id, std::move(entry));
    return id;
}

std::shared_ptr<const StoredSession> SessionStore::get(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : it->second;
}

std::vector<std::string> SessionStore::ids() const {
    std::shared_lock lock(mutex_);
    return order_;
}

std::vector<std::pair<std::filesystem::path, std::string>> SessionStore::load_directory(
    const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".xml" || ext == ".csv")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<std::pair<std::filesystem::path, std::string>> failures;
    for (const auto& f : files) {
        try {
            add(load_log_file(f));
        } catch (const std::exception& e) {
            failures.emplace_back(f, e.what());
        }
    }
    return failures;
}

// ---------------------------------------------------------------------------
// External vocabulary

namespace {

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        auto item = detail::trim(text.substr(start, end - start));
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string uppercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

OperationClassSet parse_classes(std::string_view list, std::string_view what) {
    OperationClassSet set;
    for (const auto& item : split_list(list)) {
        auto c = parse_operation_class(lowercase(item));
        if (!c) throw BadQueryError("unknown operation class '" + item + "' in " + std::string(what));
        set.insert(*c);
    }
    return set;
}

double parse_positive(std::string_view text, std::string_view what) {
    text = detail::trim(text);
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !(v > 0))
        throw BadQueryError(std::string(what) + " must be a positive number");
    return v;
}

}  // namespace

ChartConfig chart_config_from(const ChartOptions& o) {
    ChartConfig cfg;
    if (o.sort) {
        auto s = parse_chart_sort(lowercase(detail::trim(*o.sort)));
        if (!s) throw BadQueryError("unknown sort '" + *o.sort + "'");
        cfg.sort = *s;
    }
    if (o.window) cfg.window_seconds = parse_positive(*o.window, "window");
    if (o.width) cfg.width = parse_positive(*o.width, "width");
    if (o.hide_types) {
        for (const auto& item : split_list(*o.hide_types)) {
            auto t = parse_element_type(lowercase(item));
            if (!t) throw BadQueryError("unknown element type '" + item + "'");
            cfg.hidden_element_types.insert(*t);
        }
    }
    if (o.hide_ops) cfg.hidden_operation_classes = parse_classes(*o.hide_ops, "hide_ops");
    if (o.hide_kinds) {
        for (const auto& item : split_list(*o.hide_kinds)) {
            auto k = parse_operation_kind(uppercase(item));
            if (!k) throw BadQueryError("unknown operation kind '" + item + "'");
            cfg.hidden_kinds.insert(*k);
        }
    }
    if (o.hide_elements_with) cfg.hide_elements_with_class = parse_classes(*o.hide_elements_with, "hide_elements_with");
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw BadQueryError(e.what());
    }
    return cfg;
}

ReplayPosition parse_replay_position(std::string_view text) {
    text = detail::trim(text);
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        std::size_t n = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
        if (ec == std::errc{}) return n;
    }
    auto ts = parse_timestamp(text);
    if (!ts) throw BadQueryError("'" + std::string(text) + "' is neither an event index nor a timestamp");
    return *ts;
}

ProcessModelState replay_at(const Session& session, const ReplayPosition& at) {
    return std::visit([&](const auto& v) { return replay(session, v); }, at);
}

nlohmann::json to_json(const LogDiagnostic& d) {
    return {{"severity", to_string(d.severity)},
            {"code", to_string(d.code)},
            {"event_index", d.event_index ? nlohmann::json(*d.event_index) : nlohmann::json(nullptr)},
            {"location", d.location},
            {"message", d.message}};
}

nlohmann::json to_json(const std::vector<LogDiagnostic>& diagnostics) {
    auto out = nlohmann::json::array();
    for (const auto& d : diagnostics) out.push_back(to_json(d));
    return out;
}

Session load_log_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_log(buf.str(), path.stem().string());
}

std::string chart_svg(const Session& session, const ChartConfig& config, bool legend) {
    auto style = default_render_style();
    style.legend = legend;
    return render_svg(build_chart(session, config), style);
}

int default_port() {
    if (const char* env = std::getenv("PPMCHART_PORT")) {
        int port = 0;
        std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), port);
        if (ec == std::errc{} && ptr == s.data() + s.size() && port > 0 && port < 65536) return port;
    }
    return kDefaultPort;
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kSvg = "image/svg+xml";

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", kJson);
}

void send_error(httplib::Response& res, int status, std::string_view message) {
    send_json(res, status, {{"error", message}});
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) return std::nullopt;
    return req.get_param_value(name);
}

ChartOptions chart_options(const httplib::Request& req) {
    return {param(req, "sort"),      param(req, "window"),     param(req, "width"), param(req, "hide_types"),
            param(req, "hide_ops"),  param(req, "hide_kinds"), param(req, "hide_elements_with")};
}

bool truthy(const std::optional<std::string>& v) { return v && (*v == "1" || *v == "true" || *v == "yes"); }

// Wraps a per-session GET handler with lookup and error mapping.
template <typename Handler>
httplib::Server::Handler session_route(SessionStore& store, Handler handler) {
    return [&store, handler](const httplib::Request& req, httplib::Response& res) {
        const auto entry = store.get(req.matches[1]);
        if (!entry) return send_error(res, 404, "unknown session");
        try {
            handler(*entry, req, res);
        } catch (const BadQueryError& e) {
            send_error(res, 400, e.what());
        } catch (const std::invalid_argument& e) {
            send_error(res, 400, e.what());
        } catch (const EmptySessionError& e) {
            send_error(res, 422, e.what());
        }
    };
}

}  // namespace

void register_routes(httplib::Server& server, SessionStore& store) {
    server.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
        try {
            auto session = parse_log(req.body, req.has_param("id") ? req.get_param_value("id") : std::string{});
            const auto events = session.events.size();
            const auto id = store.add(std::move(session));
            send_json(res, 201, {{"id", id}, {"event_count", events}, {"diagnostics", to_json(store.get(id)->diagnostics)}});
        } catch (const LogParseError& e) {
            send_json(res, 422, {{"error", "unparseable log"}, {"diagnostics", to_json(e.diagnostics())}});
        }
    });

    server.Get("/sessions", [&store](const httplib::Request&, httplib::Response& res) {
        auto list = nlohmann::json::array();
        for (const auto& id : store.ids()) {
            const auto entry = store.get(id);
            list.push_back({{"id", id},
                            {"event_count", entry->session.events.size()},
                            {"format", entry->session.format == LogFormat::Xml ? "xml" : "csv"},
                            {"has_errors", has_errors(entry->diagnostics)}});
        }
        send_json(res, 200, list);
    });

    server.Get(R"(/sessions/([^/]+)/chart)",
               session_route(store, [](const StoredSession& s, const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, to_json(build_chart(s.session, chart_config_from(chart_options(req)))));
               }));

    server.Get(R"(/sessions/([^/]+)/chart\.svg)",
               session_route(store, [](const StoredSession& s, const httplib::Request& req, httplib::Response& res) {
                   const auto cfg = chart_config_from(chart_options(req));
                   res.set_content(chart_svg(s.session, cfg, truthy(param(req, "legend"))), kSvg);
               }));

    server.Get(R"(/sessions/([^/]+)/overview\.svg)",
               session_route(store, [](const StoredSession& s, const httplib::Request& req, httplib::Response& res) {
                   const auto chart = build_chart(s.session, chart_config_from(chart_options(req)));
                   res.set_content(render_overview(chart, default_render_style()), kSvg);
               }));

    server.Get(R"(/sessions/([^/]+)/model)",
               session_route(store, [](const StoredSession& s, const httplib::Request& req, httplib::Response& res) {
                   if (!req.has_param("at")) return send_json(res, 200, to_json(s.final_model));
                   send_json(res, 200, to_json(replay_at(s.session, parse_replay_position(req.get_param_value("at")))));
               }));

    server.Get(R"(/sessions/([^/]+)/patterns)",
               session_route(store, [](const StoredSession& s, const httplib::Request& req, httplib::Response& res) {
                   auto threshold = ChunkThreshold::automatic();
                   if (auto t = param(req, "chunk_threshold")) threshold = ChunkThreshold::fixed(parse_positive(*t, "chunk_threshold"));
                   send_json(res, 200, to_json(analyze(s.session, threshold)));
               }));

    server.Get(R"(/sessions/([^/]+)/diagnostics)",
               session_route(store, [](const StoredSession& s, const httplib::Request&, httplib::Response& res) {
                   send_json(res, 200, to_json(s.diagnostics));
               }));
}

// ---------------------------------------------------------------------------
// CLI

namespace {

struct LoadFailure {
    int code;
};

Session load_or_report(const std::string& path, std::ostream& err) {
    try {
        return load_log_file(path);
    } catch (const LogParseError& e) {
        for (const auto& d : e.diagnostics()) err << path << ": " << format_diagnostic(d) << '\n';
        throw LoadFailure{1};
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        throw LoadFailure{1};
    }
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"PPMChart: dotted charts and pattern analysis for process-of-process-modeling logs"};
    app.require_subcommand(1);

    std::string log_path;

    auto* validate = app.add_subcommand("validate", "Check a log and print diagnostics");
    validate->add_option("log", log_path, "XML or CSV log")->required();

    ChartOptions chart_opts;
    std::string out_path, overview_path;
    bool legend = false;
    auto* render = app.add_subcommand("render", "Render a PPMChart as SVG");
    render->add_option("log", log_path, "XML or CSV log")->required();
    render->add_option("--out,-o", out_path, "Output SVG (default stdout)");
    render->add_option("--overview", overview_path, "Also write the unfiltered overview SVG");
    render->add_option("--sort", chart_opts.sort, "first_event | distance_from_start | create_order_from_start");
    render->add_option("--window", chart_opts.window, "Window length in seconds (default 3600)");
    render->add_option("--width", chart_opts.width, "Chart width in units (default 1000)");
    render->add_option("--hide-types", chart_opts.hide_types, "Element types to hide, comma separated");
    render->add_option("--hide-ops", chart_opts.hide_ops, "Operation classes to hide: create,move,delete,name");
    render->add_option("--hide-kinds", chart_opts.hide_kinds, "Operation kinds to hide, e.g. move_edge_label");
    render->add_option("--hide-elements-with", chart_opts.hide_elements_with,
                       "Hide timelines containing these operation classes");
    render->add_flag("--legend", legend, "Draw the color legend");

    std::string format = "json";
    std::optional<double> threshold;
    auto* analyze_cmd = app.add_subcommand("analyze", "Compute the modeling pattern report");
    analyze_cmd->add_option("log", log_path, "XML or CSV log")->required();
    analyze_cmd->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    analyze_cmd->add_option("--chunk-threshold", threshold, "Pause threshold in seconds (default: automatic)")
        ->check(CLI::PositiveNumber);

    std::optional<std::string> at;
    auto* replay_cmd = app.add_subcommand("replay", "Print the model state as JSON");
    replay_cmd->add_option("log", log_path, "XML or CSV log")->required();
    replay_cmd->add_option("--at", at, "Event count or ISO-8601 timestamp (default: end)");

    int port = default_port();
    std::string dir;
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--port", port, "Listen port (env PPMCHART_PORT)")->check(CLI::Range(1, 65535));
    serve->add_option("--dir", dir, "Preload every log in this directory")->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (*validate) {
            const auto session = load_or_report(log_path, err);
            const auto diagnostics = validate_session(session);
            for (const auto& d : diagnostics) out << format_diagnostic(d) << '\n';
            if (diagnostics.empty()) out << "ok: " << session.events.size() << " events\n";
            return has_errors(diagnostics) ? 1 : 0;
        }
        if (*render) {
            ChartConfig cfg;
            try {
                cfg = chart_config_from(chart_opts);
            } catch (const BadQueryError& e) {
                err << e.what() << '\n';
                return 2;
            }
            const auto session = load_or_report(log_path, err);
            for (const auto& d : validate_session(session)) err << format_diagnostic(d) << '\n';
            write_output(out_path, chart_svg(session, cfg, legend), out);
            if (!overview_path.empty())
                write_output(overview_path, render_overview(build_chart(session, cfg), default_render_style()), out);
            return 0;
        }
        if (*analyze_cmd) {
            const auto session = load_or_report(log_path, err);
            const auto report =
                analyze(session, threshold ? ChunkThreshold::fixed(*threshold) : ChunkThreshold::automatic());
            if (format == "csv")
                out << pattern_csv_header() << pattern_csv_row(report);
            else
                out << to_json(report).dump(2) << '\n';
            return 0;
        }
        if (*replay_cmd) {
            ReplayPosition position{std::size_t{0}};
            if (at) {
                try {
                    position = parse_replay_position(*at);
                } catch (const BadQueryError& e) {
                    err << e.what() << '\n';
                    return 2;
                }
            }
            const auto session = load_or_report(log_path, err);
            const auto model = at ? replay_at(session, position) : final_model(session);
            out << to_json(model).dump(2) << '\n';
            return 0;
        }
        if (*serve) {
            SessionStore store;
            if (!dir.empty())
                for (const auto& [file, why] : store.load_directory(dir)) err << "skipped " << file.string() << ": " << why << '\n';
            httplib::Server server;
            register_routes(server, store);
            err << "listening on port " << port << " (" << store.ids().size() << " sessions)\n";
            return server.listen("0.0.0.0", port) ? 0 : 1;
        }
    } catch (const LoadFailure& f) {
        return f.code;
    } catch (const EmptySessionError& e) {
        err << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace ppmchart
