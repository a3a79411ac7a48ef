#include "ppmchart/oplog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "text_util.hpp"

namespace ppmchart {

namespace {

struct KindInfo {
    OperationKind kind;
    std::string_view name;
    OperationClassSet classes;
    ElementType element;
};

using enum OperationKind;
using C = OperationClass;
using E = ElementType;

// Bendpoint operations move the edge,
// reconnect both deletes and creates it.
constexpr std::array<KindInfo, kOperationKindCount> kKinds = {{
    {CreateStartEvent, "CREATE_START_EVENT", {C::Create}, E::StartEvent},
    {CreateEndEvent, "CREATE_END_EVENT", {C::Create}, E::EndEvent},
    {CreateActivity, "CREATE_ACTIVITY", {C::Create}, E::Activity},
    {CreateXor, "CREATE_XOR", {C::Create}, E::XorGateway},
    {CreateAnd, "CREATE_AND", {C::Create}, E::AndGateway},
    {CreateEdge, "CREATE_EDGE", {C::Create}, E::Edge},
    {ReconnectEdge, "RECONNECT_EDGE", {C::Create, C::Delete}, E::Edge},
    {MoveStartEvent, "MOVE_START_EVENT", {C::Move}, E::StartEvent},
    {MoveEndEvent, "MOVE_END_EVENT", {C::Move}, E::EndEvent},
    {MoveActivity, "MOVE_ACTIVITY", {C::Move}, E::Activity},
    {MoveXor, "MOVE_XOR", {C::Move}, E::XorGateway},
    {MoveAnd, "MOVE_AND", {C::Move}, E::AndGateway},
    {MoveEdgeLabel, "MOVE_EDGE_LABEL", {C::Move}, E::Edge},
    {CreateEdgeBendpoint, "CREATE_EDGE_BENDPOINT", {C::Move}, E::Edge},
    {MoveEdgeBendpoint, "MOVE_EDGE_BENDPOINT", {C::Move}, E::Edge},
    {DeleteEdgeBendpoint, "DELETE_EDGE_BENDPOINT", {C::Move}, E::Edge},
    {DeleteStartEvent, "DELETE_START_EVENT", {C::Delete}, E::StartEvent},
    {DeleteEndEvent, "DELETE_END_EVENT", {C::Delete}, E::EndEvent},
    {DeleteActivity, "DELETE_ACTIVITY", {C::Delete}, E::Activity},
    {DeleteXor, "DELETE_XOR", {C::Delete}, E::XorGateway},
    {DeleteAnd, "DELETE_AND", {C::Delete}, E::AndGateway},
    {DeleteEdge, "DELETE_EDGE", {C::Delete}, E::Edge},
    {NameActivity, "NAME_ACTIVITY", {C::Name}, E::Activity},
    {RenameActivity, "RENAME_ACTIVITY", {C::Name}, E::Activity},
    {NameEdge, "NAME_EDGE", {C::Name}, E::Edge},
    {RenameEdge, "RENAME_EDGE", {C::Name}, E::Edge},
}};

constexpr bool table_is_indexed_by_kind() {
    for (std::size_t i = 0; i < kKinds.size(); ++i)
        if (static_cast<std::size_t>(kKinds[i].kind) != i) return false;
    return true;
}
static_assert(table_is_indexed_by_kind(), "kKinds must list every OperationKind in declaration order");
static_assert(static_cast<std::size_t>(RenameEdge) + 1 == kOperationKindCount);

const KindInfo& info(OperationKind kind) { return kKinds[static_cast<std::size_t>(kind)]; }

constexpr std::array<std::string_view, 4> kClassNames = {"create", "move", "delete", "name"};
constexpr std::array<std::string_view, 6> kElementNames = {"start_event", "end_event", "activity",
                                                           "xor_gateway", "and_gateway", "edge"};

}  // namespace

const std::array<OperationKind, kOperationKindCount>& all_operation_kinds() {
    static const auto kinds = [] {
        std::array<OperationKind, kOperationKindCount> out{};
        for (std::size_t i = 0; i < kKinds.size(); ++i) out[i] = kKinds[i].kind;
        return out;
    }();
    return kinds;
}

OperationClassSet classify_operation(OperationKind kind) { return info(kind).classes; }

ElementType element_type_of(OperationKind kind) { return info(kind).element; }

bool is_creation(OperationKind kind) {
    switch (kind) {
        case CreateStartEvent:
        case CreateEndEvent:
        case CreateActivity:
        case CreateXor:
        case CreateAnd:
        case CreateEdge:
            return true;
        default:
            return false;
    }
}

bool is_gateway(ElementType type) { return type == E::XorGateway || type == E::AndGateway; }

std::string_view to_string(OperationKind kind) { return info(kind).name; }

std::optional<OperationKind> parse_operation_kind(std::string_view name) {
    for (const auto& k : kKinds)
        if (k.name == name) return k.kind;
    return std::nullopt;
}

std::string_view to_string(OperationClass c) { return kClassNames[static_cast<std::size_t>(c)]; }

std::string_view to_string(ElementType type) { return kElementNames[static_cast<std::size_t>(type)]; }

std::optional<OperationClass> parse_operation_class(std::string_view name) {
    for (std::size_t i = 0; i < kClassNames.size(); ++i)
        if (kClassNames[i] == name) return static_cast<OperationClass>(i);
    return std::nullopt;
}

std::optional<ElementType> parse_element_type(std::string_view name) {
    for (std::size_t i = 0; i < kElementNames.size(); ++i)
        if (kElementNames[i] == name) return static_cast<ElementType>(i);
    return std::nullopt;
}

void normalize(Session& session) {
    std::stable_sort(session.events.begin(), session.events.end(),
                     [](const ModelingEvent& a, const ModelingEvent& b) { return a.timestamp < b.timestamp; });
}

// ---------------------------------------------------------------------------
// Diagnostics

std::string_view to_string(DiagnosticCode code) {
    switch (code) {
        case DiagnosticCode::MalformedXml: return "MALFORMED_XML";
        case DiagnosticCode::MalformedCsv: return "MALFORMED_CSV";
        case DiagnosticCode::MissingColumn: return "MISSING_COLUMN";
        case DiagnosticCode::MissingAttribute: return "MISSING_ATTRIBUTE";
        case DiagnosticCode::UnknownOperation: return "UNKNOWN_OPERATION";
        case DiagnosticCode::IdTraceMismatch: return "ID_TRACE_MISMATCH";
        case DiagnosticCode::MissingTimestamp: return "MISSING_TIMESTAMP";
        case DiagnosticCode::BadTimestamp: return "BAD_TIMESTAMP";
        case DiagnosticCode::BadNumber: return "BAD_NUMBER";
        case DiagnosticCode::NoCreateFirst: return "NO_CREATE_FIRST";
        case DiagnosticCode::OpAfterDelete: return "OP_AFTER_DELETE";
        case DiagnosticCode::IdReused: return "ID_REUSED";
        case DiagnosticCode::DuplicateCreate: return "DUPLICATE_CREATE";
        case DiagnosticCode::TypeMismatch: return "TYPE_MISMATCH";
        case DiagnosticCode::DanglingEndpoint: return "DANGLING_ENDPOINT";
        case DiagnosticCode::DanglingEdge: return "DANGLING_EDGE";
        case DiagnosticCode::BadBendpointIndex: return "BAD_BENDPOINT_INDEX";
        case DiagnosticCode::NonMonotoneTimestamp: return "NON_MONOTONE_TIMESTAMP";
    }
    return "UNKNOWN";
}

std::string_view to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

std::string format_diagnostic(const LogDiagnostic& d) {
    std::string out{to_string(d.severity)};
    out += ' ';
    out += to_string(d.code);
    if (d.event_index) out += " at event " + std::to_string(*d.event_index);
    if (!d.location.empty()) out += " [" + d.location + "]";
    if (!d.message.empty()) out += ": " + d.message;
    return out;
}

bool has_errors(std::span<const LogDiagnostic> diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const LogDiagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

std::string summarize(const std::vector<LogDiagnostic>& diagnostics) {
    if (diagnostics.empty()) return "log parse error";
    std::string out = format_diagnostic(diagnostics.front());
    if (diagnostics.size() > 1) out += " (+" + std::to_string(diagnostics.size() - 1) + " more)";
    return out;
}

LogDiagnostic error(DiagnosticCode code, std::optional<std::size_t> index, std::string location,
                    std::string message = {}) {
    return {Severity::Error, code, index, std::move(location), std::move(message)};
}

}  // namespace

LogParseError::LogParseError(std::vector<LogDiagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------
// Timestamps

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()), static_cast<int>(hms.subseconds().count()));
    return buf;
}

namespace {

bool read_fixed(std::string_view& s, std::size_t digits, int& out) {
    if (s.size() < digits) return false;
    for (std::size_t i = 0; i < digits; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    std::from_chars(s.data(), s.data() + digits, out);
    s.remove_prefix(digits);
    return true;
}

bool expect(std::string_view& s, char c) {
    if (s.empty() || s.front() != c) return false;
    s.remove_prefix(1);
    return true;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    text = detail::trim(text);
    if (text.empty()) return std::nullopt;

    // Plain integer: milliseconds since the epoch.
    {
        std::int64_t ms = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), ms);
        if (ec == std::errc{} && ptr == text.data() + text.size()) return Timestamp{milliseconds{ms}};
    }

    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    std::string_view s = text;
    if (!read_fixed(s, 4, y) || !expect(s, '-') || !read_fixed(s, 2, mo) || !expect(s, '-') ||
        !read_fixed(s, 2, d))
        return std::nullopt;
    if (s.empty() || (s.front() != 'T' && s.front() != ' ')) return std::nullopt;
    s.remove_prefix(1);
    if (!read_fixed(s, 2, h) || !expect(s, ':') || !read_fixed(s, 2, mi) || !expect(s, ':') ||
        !read_fixed(s, 2, sec))
        return std::nullopt;

    std::int64_t millis = 0;
    if (!s.empty() && (s.front() == '.' || s.front() == ',')) {
        s.remove_prefix(1);
        std::size_t n = 0;
        std::int64_t scale = 100;
        while (n < s.size() && s[n] >= '0' && s[n] <= '9') {
            millis += (s[n] - '0') * scale;
            scale /= 10;
            ++n;
        }
        if (n == 0 || n > 9) return std::nullopt;
        s.remove_prefix(n);
    }

    minutes offset{0};
    if (s == "Z" || s.empty()) {
    } else if (s.front() == '+' || s.front() == '-') {
        const int sign = s.front() == '+' ? 1 : -1;
        s.remove_prefix(1);
        int oh = 0, om = 0;
        if (!read_fixed(s, 2, oh)) return std::nullopt;
        expect(s, ':');
        if (!read_fixed(s, 2, om) || !s.empty()) return std::nullopt;
        offset = minutes{sign * (oh * 60 + om)};
    } else {
        return std::nullopt;
    }

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
    const auto tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} + milliseconds{millis} - offset;
    return time_point_cast<milliseconds>(tp);
}

// ---------------------------------------------------------------------------
// Payload attributes shared by both readers

namespace {

struct RawEvent {
    std::optional<std::string> operation;
    std::optional<std::string> element_id;
    std::optional<std::string> timestamp;
    std::optional<std::string> x, y, source, target, label, bendpoint;
};

std::optional<double> parse_double(std::string_view text) {
    text = detail::trim(text);
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<int> parse_int(std::string_view text) {
    text = detail::trim(text);
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

// Converts the raw string fields; appends a diagnostic per problem and returns
// nullopt if any was found.
std::optional<ModelingEvent> build_event(const RawEvent& raw, std::size_t index, const std::string& location,
                                         std::vector<LogDiagnostic>& diagnostics) {
    const auto before = diagnostics.size();
    ModelingEvent ev;

    if (!raw.operation || detail::trim(*raw.operation).empty()) {
        diagnostics.push_back(error(DiagnosticCode::MissingAttribute, index, location, "missing operation name"));
    } else if (auto kind = parse_operation_kind(detail::trim(*raw.operation))) {
        ev.kind = *kind;
    } else {
        diagnostics.push_back(error(DiagnosticCode::UnknownOperation, index, location,
                                    "unknown operation '" + std::string(detail::trim(*raw.operation)) + "'"));
    }

    if (!raw.element_id || raw.element_id->empty())
        diagnostics.push_back(error(DiagnosticCode::MissingAttribute, index, location, "missing element id"));
    else
        ev.element_id = *raw.element_id;

    if (!raw.timestamp || detail::trim(*raw.timestamp).empty()) {
        diagnostics.push_back(error(DiagnosticCode::MissingTimestamp, index, location));
    } else if (auto ts = parse_timestamp(*raw.timestamp)) {
        ev.timestamp = *ts;
    } else {
        diagnostics.push_back(
            error(DiagnosticCode::BadTimestamp, index, location, "cannot parse '" + *raw.timestamp + "'"));
    }

    if (raw.x || raw.y) {
        auto x = raw.x ? parse_double(*raw.x) : std::nullopt;
        auto y = raw.y ? parse_double(*raw.y) : std::nullopt;
        if (x && y)
            ev.position = Point{*x, *y};
        else
            diagnostics.push_back(error(DiagnosticCode::BadNumber, index, location, "position needs numeric x and y"));
    }
    if (raw.bendpoint) {
        if (auto b = parse_int(*raw.bendpoint); b && *b >= 0)
            ev.bendpoint = *b;
        else
            diagnostics.push_back(error(DiagnosticCode::BadNumber, index, location, "bad bendpoint index"));
    }
    ev.source_id = raw.source;
    ev.target_id = raw.target;
    ev.label = raw.label;

    if (diagnostics.size() != before) return std::nullopt;
    return ev;
}

}  // namespace

// ---------------------------------------------------------------------------
// XML

Session parse_xml_log(std::string_view bytes) {
    namespace pt = boost::property_tree;
    pt::ptree doc;
    try {
        std::istringstream in{std::string(bytes)};
        pt::read_xml(in, doc, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw LogParseError({error(DiagnosticCode::MalformedXml, std::nullopt, "line " + std::to_string(e.line()),
                                   e.message())});
    }

    const auto process = doc.get_child_optional("process");
    if (!process)
        throw LogParseError({error(DiagnosticCode::MalformedXml, std::nullopt, "document", "root element must be <process>")});

    Session session;
    session.format = LogFormat::Xml;
    session.session_id = process->get<std::string>("<xmlattr>.id", "");

    std::vector<LogDiagnostic> diagnostics;
    std::size_t index = 0;
    for (const auto& [tag, trace] : *process) {
        if (tag != "trace") continue;
        std::optional<std::string> trace_name;
        if (auto n = trace.get_optional<std::string>("<xmlattr>.name"); n && !n->empty()) trace_name = *n;
        if (!trace_name)
            diagnostics.push_back(error(DiagnosticCode::MissingAttribute, std::nullopt, "trace", "trace without name"));

        for (const auto& [etag, event] : trace) {
            if (etag != "event") continue;
            const std::string location = trace_name.value_or("");
            RawEvent raw;
            if (auto name = event.get_optional<std::string>("name")) raw.operation = *name;
            std::optional<std::string> id;
            for (const auto& [atag, attr] : event) {
                if (atag != "attribute") continue;
                const auto key = attr.get<std::string>("<xmlattr>.key", "");
                const auto value = attr.data();
                if (key == "id") id = value;
                else if (key == "timestamp") raw.timestamp = value;
                else if (key == "x") raw.x = value;
                else if (key == "y") raw.y = value;
                else if (key == "source") raw.source = value;
                else if (key == "target") raw.target = value;
                else if (key == "label") raw.label = value;
                else if (key == "bendpoint") raw.bendpoint = value;
            }
            raw.element_id = id ? id : trace_name;
            if (!id) {
                diagnostics.push_back(error(DiagnosticCode::MissingAttribute, index, location, "event without id attribute"));
            } else if (trace_name && *id != *trace_name) {
                diagnostics.push_back(error(DiagnosticCode::IdTraceMismatch, index, location,
                                            "event id '" + *id + "' inside trace '" + *trace_name + "'"));
            }
            if (auto ev = build_event(raw, index, location, diagnostics)) session.events.push_back(std::move(*ev));
            ++index;
        }
    }
    if (has_errors(diagnostics)) throw LogParseError(std::move(diagnostics));
    normalize(session);
    return session;
}

std::string serialize_xml(const Session& session) {
    using detail::xml_escape;
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<const ModelingEvent*>> traces;
    for (const auto& ev : session.events) {
        auto [it, inserted] = traces.try_emplace(ev.element_id);
        if (inserted) order.push_back(ev.element_id);
        it->second.push_back(&ev);
    }

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<process id=\"" + xml_escape(session.session_id) + "\">\n";
    auto attribute = [&out](std::string_view key, const std::string& value) {
        out += "      <attribute key=\"";
        out += key;
        out += "\">" + xml_escape(value) + "</attribute>\n";
    };
    for (const auto& id : order) {
        out += "  <trace name=\"" + xml_escape(id) + "\">\n";
        for (const auto* ev : traces[id]) {
            out += "    <event>\n      <name>";
            out += to_string(ev->kind);
            out += "</name>\n";
            attribute("id", ev->element_id);
            attribute("timestamp", format_timestamp(ev->timestamp));
            if (ev->position) {
                attribute("x", detail::format_number(ev->position->x));
                attribute("y", detail::format_number(ev->position->y));
            }
            if (ev->source_id) attribute("source", *ev->source_id);
            if (ev->target_id) attribute("target", *ev->target_id);
            if (ev->label) attribute("label", *ev->label);
            if (ev->bendpoint) attribute("bendpoint", std::to_string(*ev->bendpoint));
            out += "    </event>\n";
        }
        out += "  </trace>\n";
    }
    out += "</process>\n";
    return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr std::array<std::string_view, 9> kColumns = {"timestamp", "element_id", "operation", "x",        "y",
                                                      "source",    "target",     "label",     "bendpoint"};

}  // namespace

Session parse_tabular_log(std::string_view bytes, std::string session_id) {
    std::vector<detail::CsvRecord> records;
    try {
        records = detail::parse_csv(bytes);
    } catch (const detail::CsvError& e) {
        throw LogParseError({error(DiagnosticCode::MalformedCsv, std::nullopt, "line " + std::to_string(e.line), e.what())});
    }

    Session session;
    session.session_id = std::move(session_id);
    session.format = LogFormat::Tabular;
    if (records.empty())
        throw LogParseError({error(DiagnosticCode::MissingColumn, std::nullopt, "line 1", "header row required")});

    std::map<std::string_view, std::size_t> column_of;
    const auto& header = records.front();
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        const auto name = detail::trim(header.fields[i].text);
        for (auto c : kColumns)
            if (c == name) column_of.emplace(c, i);
    }
    std::vector<LogDiagnostic> diagnostics;
    for (auto required : {"timestamp", "element_id", "operation"})
        if (!column_of.contains(required))
            diagnostics.push_back(error(DiagnosticCode::MissingColumn, std::nullopt, "line 1",
                                        std::string("missing column '") + required + "'"));
    if (!diagnostics.empty()) throw LogParseError(std::move(diagnostics));

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t index = r - 1;
        const std::string location = "line " + std::to_string(rec.line);
        auto cell = [&](std::string_view column) -> std::optional<std::string> {
            auto it = column_of.find(column);
            if (it == column_of.end() || it->second >= rec.fields.size()) return std::nullopt;
            const auto& f = rec.fields[it->second];
            if (f.text.empty() && !f.quoted) return std::nullopt;
            return f.text;
        };
        RawEvent raw{cell("operation"), cell("element_id"), cell("timestamp"), cell("x"),     cell("y"),
                     cell("source"),    cell("target"),     cell("label"),     cell("bendpoint")};
        if (auto ev = build_event(raw, index, location, diagnostics)) session.events.push_back(std::move(*ev));
    }
    if (has_errors(diagnostics)) throw LogParseError(std::move(diagnostics));
    normalize(session);
    return session;
}

std::string serialize_tabular(const Session& session) {
    using detail::csv_field;
    std::string out = "timestamp,element_id,operation,x,y,source,target,label,bendpoint\n";
    auto optional_field = [](const std::optional<std::string>& v) {
        // An empty but present value is written as "" so it survives the round trip.
        if (!v) return std::string{};
        return v->empty() ? std::string("\"\"") : csv_field(*v);
    };
    for (const auto& ev : session.events) {
        out += format_timestamp(ev.timestamp);
        out += ',' + csv_field(ev.element_id);
        out += ',';
        out += to_string(ev.kind);
        out += ',' + (ev.position ? detail::format_number(ev.position->x) : std::string{});
        out += ',' + (ev.position ? detail::format_number(ev.position->y) : std::string{});
        out += ',' + optional_field(ev.source_id);
        out += ',' + optional_field(ev.target_id);
        out += ',' + optional_field(ev.label);
        out += ',' + (ev.bendpoint ? std::to_string(*ev.bendpoint) : std::string{});
        out += '\n';
    }
    return out;
}

Session parse_log(std::string_view bytes, std::string session_id) {
    const auto body = detail::trim(bytes);
    const bool xml = !body.empty() && body.front() == '<';
    if (!xml) return parse_tabular_log(bytes, std::move(session_id));
    auto session = parse_xml_log(bytes);
    if (session.session_id.empty()) session.session_id = std::move(session_id);
    return session;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<LogDiagnostic> validate_session(const Session& session) {
    struct Lifecycle {
        ElementType type;
        bool alive = true;
        int bendpoints = 0;
        std::optional<std::string> source, target;
        std::size_t deleted_at = 0;
        std::size_t attached_at = 0;
    };
    std::unordered_map<std::string, Lifecycle> elements;
    std::vector<LogDiagnostic> out;

    auto diag = [&](Severity sev, DiagnosticCode code, std::size_t i, std::string msg = {}) {
        out.push_back({sev, code, i, session.events[i].element_id, std::move(msg)});
    };
    auto check_endpoint = [&](std::size_t i, const std::optional<std::string>& id, std::string_view role) {
        if (!id) return;
        auto it = elements.find(*id);
        if (it == elements.end() || it->second.type == E::Edge)
            diag(Severity::Error, DiagnosticCode::DanglingEndpoint, i, std::string(role) + " '" + *id + "' was never created");
        else if (!it->second.alive)
            diag(Severity::Error, DiagnosticCode::DanglingEndpoint, i, std::string(role) + " '" + *id + "' is deleted");
    };

    for (std::size_t i = 0; i < session.events.size(); ++i) {
        const auto& ev = session.events[i];
        if (i > 0 && ev.timestamp < session.events[i - 1].timestamp)
            diag(Severity::Error, DiagnosticCode::NonMonotoneTimestamp, i);

        const auto type = element_type_of(ev.kind);
        auto it = elements.find(ev.element_id);
        if (it == elements.end() || !it->second.alive) {
            if (!is_creation(ev.kind)) {
                diag(Severity::Error,
                     it == elements.end() ? DiagnosticCode::NoCreateFirst : DiagnosticCode::OpAfterDelete, i,
                     std::string(to_string(ev.kind)));
                continue;
            }
            if (it != elements.end()) {
                if ((it->second.type == E::Edge) != (type == E::Edge)) {
                    diag(Severity::Error, DiagnosticCode::TypeMismatch, i, "node and edge ids must not overlap");
                    continue;
                }
                diag(Severity::Warning, DiagnosticCode::IdReused, i);
            }
            if (type == E::Edge) {
                check_endpoint(i, ev.source_id, "source");
                check_endpoint(i, ev.target_id, "target");
            }
            elements.insert_or_assign(ev.element_id, Lifecycle{type, true, 0, ev.source_id, ev.target_id, 0, i});
            continue;
        }

        auto& el = it->second;
        if (is_creation(ev.kind)) {
            diag(Severity::Error, DiagnosticCode::DuplicateCreate, i);
            continue;
        }
        if (type != el.type) {
            diag(Severity::Error, DiagnosticCode::TypeMismatch, i,
                 std::string(to_string(ev.kind)) + " on a " + std::string(to_string(el.type)));
            continue;
        }
        switch (ev.kind) {
            case CreateEdgeBendpoint:
                if (ev.bendpoint && *ev.bendpoint > el.bendpoints)
                    diag(Severity::Error, DiagnosticCode::BadBendpointIndex, i);
                else
                    ++el.bendpoints;
                break;
            case MoveEdgeBendpoint:
            case DeleteEdgeBendpoint:
                if (!ev.bendpoint || *ev.bendpoint >= el.bendpoints)
                    diag(Severity::Error, DiagnosticCode::BadBendpointIndex, i);
                else if (ev.kind == DeleteEdgeBendpoint)
                    --el.bendpoints;
                break;
            case ReconnectEdge:
                check_endpoint(i, ev.source_id, "source");
                check_endpoint(i, ev.target_id, "target");
                if (ev.source_id) el.source = ev.source_id;
                if (ev.target_id) el.target = ev.target_id;
                el.attached_at = i;
                break;
            default:
                if (classify_operation(ev.kind).contains(C::Delete)) {
                    el.alive = false;
                    el.deleted_at = i;
                }
                break;
        }
    }

    // Alive edges whose endpoint node was deleted (no cascading deletion).
    std::vector<std::pair<std::size_t, std::string>> dangling;
    for (const auto& [id, el] : elements) {
        if (el.type != E::Edge || !el.alive) continue;
        for (const auto* end : {&el.source, &el.target}) {
            if (!*end) continue;
            auto node = elements.find(**end);
            if (node != elements.end() && node->second.type != E::Edge && !node->second.alive &&
                node->second.deleted_at > el.attached_at) {
                dangling.emplace_back(node->second.deleted_at, id);
                break;
            }
        }
    }
    std::sort(dangling.begin(), dangling.end());
    for (const auto& [at, edge] : dangling)
        out.push_back({Severity::Warning, DiagnosticCode::DanglingEdge, at, edge,
                       "edge still alive after endpoint '" + session.events[at].element_id + "' was deleted"});
    return out;
}

}  // namespace ppmchart
