#pragma once

// Modeling-operation event logs: the operation taxonomy, the event and
// session types, the XML and CSV readers/writers, and session validation.

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppmchart {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

enum class OperationKind : std::uint8_t {
    CreateStartEvent,
    CreateEndEvent,
    CreateActivity,
    CreateXor,
    CreateAnd,
    CreateEdge,
    ReconnectEdge,
    MoveStartEvent,
    MoveEndEvent,
    MoveActivity,
    MoveXor,
    MoveAnd,
    MoveEdgeLabel,
    CreateEdgeBendpoint,
    MoveEdgeBendpoint,
    DeleteEdgeBendpoint,
    DeleteStartEvent,
    DeleteEndEvent,
    DeleteActivity,
    DeleteXor,
    DeleteAnd,
    DeleteEdge,
    NameActivity,
    RenameActivity,
    NameEdge,
    RenameEdge,
};

inline constexpr std::size_t kOperationKindCount = 26;

/// Every operation kind, in declaration order.
const std::array<OperationKind, kOperationKindCount>& all_operation_kinds();

enum class OperationClass : std::uint8_t { Create, Move, Delete, Name };

inline constexpr std::array<OperationClass, 4> kAllOperationClasses = {
    OperationClass::Create, OperationClass::Move, OperationClass::Delete, OperationClass::Name};

/// Small bitset over OperationClass.
class OperationClassSet {
public:
    constexpr OperationClassSet() = default;
    constexpr OperationClassSet(std::initializer_list<OperationClass> classes) {
        for (auto c : classes) bits_ |= bit(c);
    }

    constexpr bool contains(OperationClass c) const { return (bits_ & bit(c)) != 0; }
    constexpr bool intersects(OperationClassSet other) const { return (bits_ & other.bits_) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::size_t size() const {
        std::size_t n = 0;
        for (auto b = bits_; b != 0; b &= b - 1) ++n;
        return n;
    }
    constexpr void insert(OperationClass c) { bits_ |= bit(c); }

    friend constexpr bool operator==(OperationClassSet, OperationClassSet) = default;

private:
    static constexpr std::uint8_t bit(OperationClass c) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
    }
    std::uint8_t bits_ = 0;
};

enum class ElementType : std::uint8_t { StartEvent, EndEvent, Activity, XorGateway, AndGateway, Edge };

inline constexpr std::array<ElementType, 6> kAllElementTypes = {
    ElementType::StartEvent, ElementType::EndEvent,   ElementType::Activity,
    ElementType::XorGateway, ElementType::AndGateway, ElementType::Edge};

OperationClassSet classify_operation(OperationKind kind);
ElementType element_type_of(OperationKind kind);

/// True for the CREATE_* kinds that bring an element into existence
/// (RECONNECT_EDGE and CREATE_EDGE_BENDPOINT are not among them).
bool is_creation(OperationKind kind);

bool is_gateway(ElementType type);

/// Canonical log name, e.g. "CREATE_ACTIVITY".
std::string_view to_string(OperationKind kind);
std::optional<OperationKind> parse_operation_kind(std::string_view name);

/// Lowercase snake case names used on the command line and over HTTP.
std::string_view to_string(OperationClass c);
std::string_view to_string(ElementType type);
std::optional<OperationClass> parse_operation_class(std::string_view name);
std::optional<ElementType> parse_element_type(std::string_view name);

struct Point {
    double x = 0;
    double y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

struct ModelingEvent {
    std::string element_id;
    OperationKind kind = OperationKind::CreateActivity;
    Timestamp timestamp{};
    std::optional<Point> position;
    std::optional<std::string> source_id;
    std::optional<std::string> target_id;
    std::optional<std::string> label;
    std::optional<int> bendpoint;

    friend bool operator==(const ModelingEvent&, const ModelingEvent&) = default;
};

enum class LogFormat : std::uint8_t { Xml, Tabular };

struct Session {
    std::string session_id;
    std::vector<ModelingEvent> events;
    LogFormat format = LogFormat::Tabular;

    friend bool operator==(const Session&, const Session&) = default;
};

/// Stable sort by timestamp; equal timestamps keep their original order.
void normalize(Session& session);

enum class Severity : std::uint8_t { Error, Warning };

enum class DiagnosticCode : std::uint8_t {
    MalformedXml,
    MalformedCsv,
    MissingColumn,
    MissingAttribute,
    UnknownOperation,
    IdTraceMismatch,
    MissingTimestamp,
    BadTimestamp,
    BadNumber,
    NoCreateFirst,
    OpAfterDelete,
    IdReused,
    DuplicateCreate,
    TypeMismatch,
    DanglingEndpoint,
    DanglingEdge,
    BadBendpointIndex,
    NonMonotoneTimestamp,
};

std::string_view to_string(DiagnosticCode code);
std::string_view to_string(Severity severity);

struct LogDiagnostic {
    Severity severity = Severity::Error;
    DiagnosticCode code = DiagnosticCode::MalformedXml;
    /// Event index (session order for validation, document order for parsing).
    std::optional<std::size_t> event_index;
    /// Trace name / element id, or line reference for CSV input.
    std::string location;
    std::string message;

    friend bool operator==(const LogDiagnostic&, const LogDiagnostic&) = default;
};

std::string format_diagnostic(const LogDiagnostic& d);
bool has_errors(std::span<const LogDiagnostic> diagnostics);

/// Thrown by the parsers; carries every problem found in the input.
class LogParseError : public std::runtime_error {
public:
    explicit LogParseError(std::vector<LogDiagnostic> diagnostics);
    const std::vector<LogDiagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<LogDiagnostic> diagnostics_;
};

Session parse_xml_log(std::string_view bytes);
Session parse_tabular_log(std::string_view bytes, std::string session_id = {});

/// Picks XML or CSV by sniffing the first non-blank character.
Session parse_log(std::string_view bytes, std::string session_id = {});

std::string serialize_tabular(const Session& session);
std::string serialize_xml(const Session& session);

std::vector<LogDiagnostic> validate_session(const Session& session);

/// ISO-8601 UTC with milliseconds, e.g. 2010-11-15T10:00:00.000Z.
std::string format_timestamp(Timestamp t);
std::optional<Timestamp> parse_timestamp(std::string_view text);

}  // namespace ppmchart
