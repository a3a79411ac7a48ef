#pragma once

// Command line and HTTP front ends over the analysis library.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ppmchart/chart.hpp"
#include "ppmchart/oplog.hpp"
#include "ppmchart/replay.hpp"

namespace httplib {
class Server;
}

namespace ppmchart {

struct StoredSession {
    Session session;
    ProcessModelState final_model;
    std::vector<LogDiagnostic> diagnostics;
};

/// In-memory, insertion-ordered session store. Readers get immutable
/// snapshots; writes are serialized.
class SessionStore {
public:
    /// Stores the session under its own id (or a generated one) and returns
    /// the id. Re-uploading an existing id replaces that entry.
    std::string add(Session session);

    std::shared_ptr<const StoredSession> get(const std::string& id) const;
    std::vector<std::string> ids() const;

    /// Loads every *.xml and *.csv file (file stem as fallback id). Returns
    /// the files that failed to parse, with their error.
    std::vector<std::pair<std::filesystem::path, std::string>> load_directory(const std::filesystem::path& dir);

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const StoredSession>> entries_;
    std::vector<std::string> order_;
    std::size_t generated_ = 0;
};

/// Malformed query parameter or command-line option value.
class BadQueryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Chart options in the external vocabulary: the sort name and
/// comma-separated lists of lowercase snake case enumeration values.
struct ChartOptions {
    std::optional<std::string> sort;
    std::optional<std::string> window;
    std::optional<std::string> width;
    std::optional<std::string> hide_types;
    std::optional<std::string> hide_ops;
    std::optional<std::string> hide_kinds;
    std::optional<std::string> hide_elements_with;
};

/// Throws BadQueryError on an unknown value.
ChartConfig chart_config_from(const ChartOptions& options);

/// Replay position: an event count or a timestamp.
using ReplayPosition = std::variant<std::size_t, Timestamp>;

/// Digits only -> event count; anything else must be a timestamp.
ReplayPosition parse_replay_position(std::string_view text);

ProcessModelState replay_at(const Session& session, const ReplayPosition& at);

nlohmann::json to_json(const LogDiagnostic& d);
nlohmann::json to_json(const std::vector<LogDiagnostic>& diagnostics);

/// Reads a log file; the file stem becomes the id when the log has none.
Session load_log_file(const std::filesystem::path& path);

/// SVG for a session with the given options, shared by CLI and HTTP.
std::string chart_svg(const Session& session, const ChartConfig& config, bool legend = false);

void register_routes(httplib::Server& server, SessionStore& store);

inline constexpr int kDefaultPort = 8080;

/// Port from PPMCHART_PORT, else kDefaultPort.
int default_port();

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ppmchart
