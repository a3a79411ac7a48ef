#pragma once

// Modeling-process analytics over one session: size and duration, chunks,
// move timing, creation order and block construction order.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ppmchart/graphmetrics.hpp"
#include "ppmchart/oplog.hpp"

namespace ppmchart {

/// Classifier thresholds in one place.
struct PatternThresholds {
    /// Auto chunking: max(min_pause_seconds, pause_gap_factor * median gap).
    double min_pause_seconds = 30;
    double pause_gap_factor = 5;
    /// ImmediateMover: median create -> first move lag at most this.
    double immediate_move_lag_seconds = 60;
    /// EndBatchMover: at least this share of moves after the last creation.
    double end_batch_fraction = 0.5;
};

inline constexpr PatternThresholds kDefaultThresholds{};

struct SessionMetrics {
    std::size_t created_element_count = 0;
    std::size_t final_alive_count = 0;
    std::size_t deleted_count = 0;
    std::size_t total_event_count = 0;
    double duration_seconds = 0;
    /// Indexed by OperationClass; RECONNECT_EDGE counts as Create and Delete.
    std::array<std::size_t, 4> class_counts{};

    std::size_t count(OperationClass c) const { return class_counts[static_cast<std::size_t>(c)]; }
};

SessionMetrics session_metrics(const Session& session);

struct Chunk {
    std::size_t start_index = 0;
    std::size_t end_index = 0;  // inclusive
    Timestamp start_time{};
    Timestamp end_time{};
    double preceding_pause_seconds = 0;

    std::size_t size() const { return end_index - start_index + 1; }
};

/// Pause threshold for detect_chunks; Auto derives it from the session.
struct ChunkThreshold {
    std::optional<double> seconds;

    static ChunkThreshold automatic() { return {}; }
    static ChunkThreshold fixed(double s) { return {s}; }
};

double auto_chunk_threshold(const Session& session, const PatternThresholds& th = kDefaultThresholds);

/// Greedy segmentation: a new chunk starts at every gap >= threshold.
std::vector<Chunk> detect_chunks(const Session& session, ChunkThreshold threshold,
                                 const PatternThresholds& th = kDefaultThresholds);

enum class MoveStyle { ImmediateMover, EndBatchMover, ContinuousMover, NoMoves };
std::string_view to_string(MoveStyle style);

struct ElementMoveLag {
    std::string element_id;
    double lag_seconds = 0;
};

struct MoveProfile {
    std::vector<ElementMoveLag> lags;
    std::optional<double> median_lag_seconds;
    double final_quarter_fraction = 0;
    double after_last_create_fraction = 0;
    MoveStyle style = MoveStyle::NoMoves;
};

MoveProfile move_profile(const Session& session, const PatternThresholds& th = kDefaultThresholds);

enum class CreationStyle { NodesThenEdges, NodesThenGatewaysThenEdges, Interleaved };
std::string_view to_string(CreationStyle style);

struct CreationProfile {
    std::vector<ElementType> sequence;
    double edge_lag_index = 0;
    double gateway_lag_index = 0;
    CreationStyle style = CreationStyle::Interleaved;
};

CreationProfile creation_profile(const Session& session);

enum class BlockStyle { LeftToRight, ActivitiesGatewaysEdges, ActivitiesThenGatewaysAndEdges, AllNodesThenEdges, Other };
std::string_view to_string(BlockStyle style);

struct BlockMember {
    std::string element_id;
    ElementType type = ElementType::Activity;
};

struct BlockConstructionOrder {
    Block block;
    std::vector<BlockMember> creation_order;
    BlockStyle style = BlockStyle::Other;
};

std::vector<BlockConstructionOrder> block_construction_orders(const Session& session,
                                                              std::size_t budget = kDefaultSearchBudget);

struct PatternReport {
    std::string session_id;
    SessionMetrics metrics;
    double chunk_threshold_seconds = 0;
    std::vector<Chunk> chunks;
    MoveProfile moves;
    CreationProfile creation;
    std::vector<BlockConstructionOrder> blocks;
};

PatternReport analyze(const Session& session, ChunkThreshold threshold = ChunkThreshold::automatic(),
                      const PatternThresholds& th = kDefaultThresholds);

nlohmann::json to_json(const PatternReport& report);

/// Flat one-row-per-session CSV for corpus statistics.
std::string pattern_csv_header();
std::string pattern_csv_row(const PatternReport& report);

}  // namespace ppmchart
