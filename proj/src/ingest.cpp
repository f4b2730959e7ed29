#include "txclean/ingest.hpp"

#include "txclean/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace txclean {

namespace {

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

void check_utf8(std::string_view line, std::size_t line_no) {
    if (find_invalid_utf8(line) != std::string_view::npos)
        throw ParseError("malformed UTF-8", line_no);
}

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n\v\f";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    });
    return out;
}

bool blank(std::string_view line) { return trim(line).empty(); }

} // namespace

std::size_t find_invalid_utf8(std::string_view text) {
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char c = s[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len;
        std::uint32_t cp;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > n)
            return i;
        for (std::size_t k = 1; k < len; ++k) {
            if ((s[i + k] & 0xC0) != 0x80)
                return i;
            cp = (cp << 6) | (s[i + k] & 0x3F);
        }
        // overlong forms, surrogates, out of range
        static constexpr std::array<std::uint32_t, 5> min_cp{0, 0, 0x80, 0x800, 0x10000};
        if (cp < min_cp[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            return i;
        i += len;
    }
    return std::string_view::npos;
}

IngestResult parse_transactions(std::istream& in, char delimiter) {
    DatabaseBuilder builder;
    IngestResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        check_utf8(line, line_no);
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        auto fields = split(line, delimiter);
        if (!builder.add(fields))
            ++result.warnings;
    }
    result.db = std::move(builder).build();
    return result;
}

void serialize_transactions(std::ostream& out, const TransactionDatabase& db, char delimiter) {
    const auto& dict = db.dictionary();
    for (const auto& t : db.transactions()) {
        bool first = true;
        for (auto id : t.items) {
            const auto& s = dict.lookup(id);
            if (s.find(delimiter) != std::string::npos || s.find('\n') != std::string::npos)
                throw std::invalid_argument("item '" + s + "' contains the delimiter or a newline");
            if (first && s.front() == '#')
                throw std::invalid_argument("item '" + s + "' would start a comment line");
            if (!first)
                out << delimiter;
            out << s;
            first = false;
        }
        out << '\n';
    }
}

QueryLogParse parse_query_log(std::istream& in) {
    QueryLogParse result;
    std::string line;
    std::size_t line_no = 0;

    std::string header;
    while (std::getline(in, header)) {
        ++line_no;
        check_utf8(header, line_no);
        if (!blank(header))
            break;
    }
    if (blank(header))
        throw ParseError("query log has no header row");

    enum Column { kAnon, kQuery, kTime, kRank, kUrl, kColumns };
    static constexpr std::array<std::string_view, kColumns> names{"anonid", "query", "querytime",
                                                                  "itemrank", "clickurl"};
    std::array<std::ptrdiff_t, kColumns> pos;
    pos.fill(-1);
    const auto header_fields = split(header, '\t');
    for (std::size_t i = 0; i < header_fields.size(); ++i) {
        const auto name = lower(trim(header_fields[i]));
        for (int c = 0; c < kColumns; ++c)
            if (name == names[c])
                pos[c] = static_cast<std::ptrdiff_t>(i);
    }
    for (int c : {kAnon, kQuery, kTime})
        if (pos[c] < 0)
            throw ParseError("missing required column '" + std::string(names[c]) + "'", line_no);

    const auto arity = header_fields.size();
    while (std::getline(in, line)) {
        ++line_no;
        check_utf8(line, line_no);
        if (blank(line))
            continue;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        auto fields = split(line, '\t');
        if (fields.size() != arity) {
            ++result.warnings;
            continue;
        }
        auto field = [&](Column c) -> std::string_view {
            return pos[c] < 0 ? std::string_view{} : fields[static_cast<std::size_t>(pos[c])];
        };

        QueryLogRecord rec;
        rec.anon_id = std::string(trim(field(kAnon)));
        rec.query = std::string(field(kQuery));
        rec.query_time = std::string(trim(field(kTime)));
        if (rec.anon_id.empty() || trim(rec.query).empty()) {
            ++result.warnings;
            continue;
        }
        const auto rank = trim(field(kRank));
        const auto url = trim(field(kUrl));
        if (rank.empty() != url.empty()) {
            ++result.warnings;
            continue;
        }
        if (!rank.empty()) {
            long value = 0;
            auto [p, ec] = std::from_chars(rank.data(), rank.data() + rank.size(), value);
            if (ec != std::errc() || p != rank.data() + rank.size()) {
                ++result.warnings;
                continue;
            }
            rec.item_rank = value;
            rec.click_url = std::string(url);
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

TransactionDatabase sessionize(std::span<const QueryLogRecord> records) {
    std::unordered_map<std::string_view, std::size_t> user_slot;
    std::vector<std::vector<std::string_view>> queries;
    for (const auto& rec : records) {
        auto [it, inserted] = user_slot.try_emplace(rec.anon_id, queries.size());
        if (inserted)
            queries.emplace_back();
        queries[it->second].push_back(rec.query);
    }
    DatabaseBuilder builder;
    for (const auto& user : queries)
        builder.add(user);
    return std::move(builder).build();
}

IngestResult parse_keyword_registration(std::istream& in) {
    DatabaseBuilder builder;
    IngestResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        check_utf8(line, line_no);
        if (blank(line))
            continue;
        auto fields = split(line, '\t');
        std::string url(trim(fields.front()));
        std::span<const std::string_view> keywords(fields.data() + 1, fields.size() - 1);
        if (url.empty() || !builder.add(keywords, std::move(url)))
            ++result.warnings;
    }
    result.db = std::move(builder).build();
    return result;
}

TransactionDatabase merge_databases(std::span<const TransactionDatabase> parts) {
    const bool labeled = std::any_of(parts.begin(), parts.end(),
                                     [](const TransactionDatabase& d) { return d.has_labels(); });
    DatabaseBuilder builder;
    std::vector<std::string_view> items;
    for (const auto& part : parts) {
        for (const auto& t : part.transactions()) {
            items.clear();
            for (auto id : t.items)
                items.push_back(part.dictionary().lookup(id));
            std::string label = part.has_labels() ? part.labels()[t.tid] : std::string{};
            builder.add(items, labeled ? std::move(label) : std::string{});
        }
    }
    return std::move(builder).build();
}

} // namespace txclean
