#include "txclean/core.hpp"

#include "txclean/error.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace txclean {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

template <typename Strings>
bool add_impl(ItemDictionary& dict, std::vector<std::vector<ItemId>>& out,
              const Strings& raw_items) {
    std::vector<ItemId> items;
    items.reserve(raw_items.size());
    for (const auto& raw : raw_items) {
        auto norm = normalize_item(raw);
        if (norm.empty())
            continue;
        items.push_back(dict.intern_normalized(std::move(norm)));
    }
    if (items.empty())
        return false;
    canonicalize(items);
    out.push_back(std::move(items));
    return true;
}

} // namespace

std::string normalize_item(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(ascii_lower(c));
    }
    return out;
}

ItemId ItemDictionary::intern(std::string_view raw) {
    auto norm = normalize_item(raw);
    if (norm.empty())
        throw ParseError("item is empty after normalization");
    return intern_normalized(std::move(norm));
}

ItemId ItemDictionary::intern_normalized(std::string normalized) {
    auto it = m_index.find(normalized);
    if (it != m_index.end())
        return it->second;
    const auto id = static_cast<ItemId>(m_strings.size());
    m_index.emplace(normalized, id);
    m_strings.push_back(std::move(normalized));
    return id;
}

std::optional<ItemId> ItemDictionary::find(std::string_view raw) const {
    auto it = m_index.find(normalize_item(raw));
    if (it == m_index.end())
        return std::nullopt;
    return it->second;
}

bool Transaction::contains(ItemId id) const {
    return std::binary_search(items.begin(), items.end(), id);
}

void canonicalize(std::vector<ItemId>& items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
}

TransactionDatabase::TransactionDatabase(ItemDictionary dictionary,
                                         std::vector<std::vector<ItemId>> transactions,
                                         std::vector<std::string> labels)
    : m_dictionary(std::move(dictionary)), m_labels(std::move(labels)) {
    if (!m_labels.empty() && m_labels.size() != transactions.size())
        throw std::invalid_argument("label count does not match transaction count");
    m_transactions.reserve(transactions.size());
    const auto m = m_dictionary.size();
    for (auto& items : transactions) {
        canonicalize(items);
        if (items.empty())
            throw std::invalid_argument("empty transaction");
        if (items.back() >= m)
            throw std::invalid_argument("item id outside dictionary");
        m_transactions.push_back({m_transactions.size(), std::move(items)});
    }
}

std::size_t TransactionDatabase::total_occurrences() const noexcept {
    return std::accumulate(m_transactions.begin(), m_transactions.end(), std::size_t{0},
                           [](std::size_t acc, const Transaction& t) { return acc + t.size(); });
}

TransactionDatabase TransactionDatabase::head(std::size_t limit) const {
    if (limit >= size())
        return *this;
    std::vector<std::vector<ItemId>> kept;
    kept.reserve(limit);
    for (std::size_t i = 0; i < limit; ++i)
        kept.push_back(m_transactions[i].items);
    std::vector<std::string> labels;
    if (has_labels())
        labels.assign(m_labels.begin(), m_labels.begin() + static_cast<std::ptrdiff_t>(limit));
    return select_and_compact(*this, kept, labels);
}

TransactionDatabase select_and_compact(const TransactionDatabase& db,
                                       std::span<const std::vector<ItemId>> transactions,
                                       std::span<const std::string> labels,
                                       std::vector<ItemId>* old_to_new) {
    const auto m = db.item_count();
    std::vector<char> used(m, 0);
    for (const auto& items : transactions)
        for (auto id : items)
            used.at(id) = 1;

    std::vector<ItemId> mapping(m, kNoItem);
    ItemDictionary dict;
    for (ItemId id = 0; id < m; ++id) {
        if (used[id])
            mapping[id] = dict.intern_normalized(db.dictionary().lookup(id));
    }

    std::vector<std::vector<ItemId>> remapped;
    remapped.reserve(transactions.size());
    for (const auto& items : transactions) {
        std::vector<ItemId> out;
        out.reserve(items.size());
        for (auto id : items)
            out.push_back(mapping[id]);
        remapped.push_back(std::move(out));
    }
    if (old_to_new)
        *old_to_new = std::move(mapping);
    return TransactionDatabase(std::move(dict), std::move(remapped),
                               std::vector<std::string>(labels.begin(), labels.end()));
}

bool DatabaseBuilder::add(std::span<const std::string_view> raw_items, std::string label) {
    if (!add_impl(m_dictionary, m_transactions, raw_items))
        return false;
    m_any_label = m_any_label || !label.empty();
    m_labels.push_back(std::move(label));
    return true;
}

bool DatabaseBuilder::add(std::span<const std::string> raw_items, std::string label) {
    if (!add_impl(m_dictionary, m_transactions, raw_items))
        return false;
    m_any_label = m_any_label || !label.empty();
    m_labels.push_back(std::move(label));
    return true;
}

TransactionDatabase DatabaseBuilder::build() && {
    if (!m_any_label)
        m_labels.clear();
    return TransactionDatabase(std::move(m_dictionary), std::move(m_transactions),
                               std::move(m_labels));
}

} // namespace txclean
