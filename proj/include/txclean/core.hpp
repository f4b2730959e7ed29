#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace txclean {

/// Dense index into an ItemDictionary, assigned 0..m-1 in first-seen order.
using ItemId = std::uint32_t;

/// Ordinal position of a transaction inside its database.
using Tid = std::size_t;

/// Canonical item spelling: ASCII lowercase, outer whitespace trimmed, inner
/// whitespace runs collapsed to one space. Non-ASCII bytes pass through.
std::string normalize_item(std::string_view raw);

/// Bidirectional string <-> ItemId map. Ids are dense and never reused.
class ItemDictionary {
public:
    /// Normalizes `raw` and returns its id, inserting it if unseen.
    /// Throws ParseError when the normalized form is empty.
    ItemId intern(std::string_view raw);

    /// Like intern() but assumes `normalized` is already canonical.
    ItemId intern_normalized(std::string normalized);

    std::optional<ItemId> find(std::string_view raw) const;
    const std::string& lookup(ItemId id) const { return m_strings.at(id); }

    std::size_t size() const noexcept { return m_strings.size(); }
    bool empty() const noexcept { return m_strings.empty(); }
    const std::vector<std::string>& strings() const noexcept { return m_strings; }

    friend bool operator==(const ItemDictionary& a, const ItemDictionary& b) {
        return a.m_strings == b.m_strings;
    }

private:
    std::vector<std::string> m_strings;
    std::unordered_map<std::string, ItemId> m_index;
};

/// A duplicate-free, sorted set of items.
struct Transaction {
    Tid tid = 0;
    std::vector<ItemId> items;

    std::size_t size() const noexcept { return items.size(); }
    bool empty() const noexcept { return items.empty(); }
    bool contains(ItemId id) const;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Sorts and deduplicates in place.
void canonicalize(std::vector<ItemId>& items);

/// Immutable ordered collection of transactions sharing one dictionary.
/// Built through DatabaseBuilder or from parts; every transaction is
/// non-empty and every item id is < item_count().
class TransactionDatabase {
public:
    TransactionDatabase() = default;

    /// Takes ownership of the parts. Item lists are canonicalized, tids are
    /// reassigned 0..n-1. `labels` is either empty or one per transaction.
    /// Throws std::invalid_argument on an empty transaction, an id outside
    /// the dictionary, or a label count mismatch.
    TransactionDatabase(ItemDictionary dictionary,
                        std::vector<std::vector<ItemId>> transactions,
                        std::vector<std::string> labels = {});

    const ItemDictionary& dictionary() const noexcept { return m_dictionary; }
    std::span<const Transaction> transactions() const noexcept { return m_transactions; }
    const Transaction& operator[](Tid tid) const { return m_transactions[tid]; }

    /// Number of transactions (n).
    std::size_t size() const noexcept { return m_transactions.size(); }
    bool empty() const noexcept { return m_transactions.empty(); }
    /// Number of distinct items (m).
    std::size_t item_count() const noexcept { return m_dictionary.size(); }
    /// Sum of |T| over all transactions.
    std::size_t total_occurrences() const noexcept;

    bool has_labels() const noexcept { return !m_labels.empty(); }
    const std::vector<std::string>& labels() const noexcept { return m_labels; }

    /// First `limit` transactions, with the dictionary compacted to the items
    /// they still use.
    TransactionDatabase head(std::size_t limit) const;

    friend bool operator==(const TransactionDatabase&, const TransactionDatabase&) = default;

private:
    ItemDictionary m_dictionary;
    std::vector<Transaction> m_transactions;
    std::vector<std::string> m_labels;
};

/// Keeps only the listed transactions (in the given order) and compacts the
/// dictionary to the items they use, preserving relative id order.
/// `old_to_new`, when given, receives the item id mapping (kNoItem for dropped ids).
inline constexpr ItemId kNoItem = static_cast<ItemId>(-1);
TransactionDatabase select_and_compact(const TransactionDatabase& db,
                                       std::span<const std::vector<ItemId>> transactions,
                                       std::span<const std::string> labels,
                                       std::vector<ItemId>* old_to_new = nullptr);

/// Incremental construction used by the parsers. Single writer.
class DatabaseBuilder {
public:
    /// Adds one transaction from raw item strings. Items that normalize to
    /// empty are ignored and duplicates dropped. Returns false (and adds
    /// nothing) when no item survives.
    bool add(std::span<const std::string_view> raw_items, std::string label = {});
    bool add(std::span<const std::string> raw_items, std::string label = {});

    std::size_t size() const noexcept { return m_transactions.size(); }

    TransactionDatabase build() &&;

private:
    ItemDictionary m_dictionary;
    std::vector<std::vector<ItemId>> m_transactions;
    std::vector<std::string> m_labels;
    bool m_any_label = false;
};

} // namespace txclean
