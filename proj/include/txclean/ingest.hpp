#pragma once

#include "txclean/core.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace txclean {

/// Result of a parser: the database plus the number of input lines or rows
/// that were skipped with a warning.
struct IngestResult {
    TransactionDatabase db;
    std::size_t warnings = 0;
};

/// Returns the byte offset of the first invalid UTF-8 sequence, or npos.
std::size_t find_invalid_utf8(std::string_view text);

/// Generic format: one transaction per line, items separated by `delimiter`.
/// Blank lines and lines starting with '#' are ignored; a line whose items
/// all normalize to empty is skipped and counted. Throws ParseError (with the
/// line number) on malformed UTF-8.
IngestResult parse_transactions(std::istream& in, char delimiter = '\t');

/// Writes `db` in the generic format, items of each transaction in id order.
/// Throws std::invalid_argument when an item cannot be represented (contains
/// the delimiter or a line break, or would turn the line into a comment).
void serialize_transactions(std::ostream& out, const TransactionDatabase& db,
                            char delimiter = '\t');

/// One row of an AOL-style query log.
struct QueryLogRecord {
    std::string anon_id;
    std::string query;
    std::string query_time;
    std::optional<long> item_rank;
    std::optional<std::string> click_url;

    friend bool operator==(const QueryLogRecord&, const QueryLogRecord&) = default;
};

struct QueryLogParse {
    std::vector<QueryLogRecord> records;
    std::size_t warnings = 0;
};

/// TSV with a header naming AnonID, Query, QueryTime and optionally ItemRank
/// and ClickURL, in any order (names matched case-insensitively). Rows with
/// the wrong field count, an empty AnonID/Query, a non-numeric ItemRank, or
/// only one of ItemRank/ClickURL are skipped and counted.
QueryLogParse parse_query_log(std::istream& in);

/// Groups records by exact anon_id. One transaction per user, ordered by the
/// user's first appearance; each normalized query string is one item.
TransactionDatabase sessionize(std::span<const QueryLogRecord> records);

/// One line per URL: URL, TAB, then TAB-separated keywords. The URL becomes
/// the transaction label. Lines with no usable keyword are skipped and counted.
IngestResult parse_keyword_registration(std::istream& in);

/// Concatenates databases in argument order: dictionary union, tids reassigned.
TransactionDatabase merge_databases(std::span<const TransactionDatabase> parts);

} // namespace txclean
