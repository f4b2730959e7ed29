#include "test_support.hpp"

#include "txclean/core.hpp"
#include "txclean/error.hpp"

#include <doctest.h>

#include <random>

using namespace txclean;
using txclean::testing::make_db;

TEST_CASE("normalize_item lowercases, trims and collapses whitespace") {
    CHECK(normalize_item("  Amusement   Park ") == "amusement park");
    CHECK(normalize_item("a\t\tb") == "a b");
    CHECK(normalize_item("\t \r") == "");
    CHECK(normalize_item("Caf\xc3\xa9") == "caf\xc3\xa9");
}

TEST_CASE("intern assigns dense ids in first-seen order") {
    ItemDictionary dict;
    CHECK(dict.intern("disneyland") == 0);
    CHECK(dict.intern("disneyland") == 0);
    CHECK(dict.intern("Disneyland ") == 0);
    for (auto s : {"a", "b", "c", "d"})
        dict.intern(s);
    REQUIRE(dict.size() == 5);
    CHECK(dict.intern("ichiro") == 5);
    CHECK(dict.lookup(5) == "ichiro");
    CHECK(dict.find("ICHIRO") == std::optional<ItemId>(5));
    CHECK_FALSE(dict.find("nope").has_value());
    CHECK_THROWS_AS(dict.intern("   "), ParseError);
}

TEST_CASE("builder dedups and sorts items, skipping empty rows") {
    DatabaseBuilder builder;
    std::vector<std::string> row{"b", "a", "B", "a"};
    CHECK(builder.add(row));
    std::vector<std::string> blank{" ", ""};
    CHECK_FALSE(builder.add(blank));
    const auto db = std::move(builder).build();
    REQUIRE(db.size() == 1);
    CHECK(db[0].items == std::vector<ItemId>{0, 1});
    CHECK(db.dictionary().lookup(0) == "b");
    CHECK_FALSE(db.has_labels());
}

TEST_CASE("database constructor rejects broken parts") {
    ItemDictionary dict;
    dict.intern("a");
    CHECK_THROWS_AS(TransactionDatabase(dict, {{}}), std::invalid_argument);
    CHECK_THROWS_AS(TransactionDatabase(dict, {{3}}), std::invalid_argument);
    CHECK_THROWS_AS(TransactionDatabase(dict, {{0}}, {"x", "y"}), std::invalid_argument);
    const TransactionDatabase ok(dict, {{0, 0}});
    CHECK(ok[0].items == std::vector<ItemId>{0});
}

TEST_CASE("occurrences are conserved between items and transactions") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 50; ++round) {
        const auto db = txclean::testing::random_db(rng, 40, 30, 8);
        const auto freq = txclean::testing::naive_frequencies(db);
        std::uint64_t by_item = 0;
        for (auto f : freq)
            by_item += f;
        CHECK(by_item == db.total_occurrences());
        for (const auto& t : db.transactions()) {
            CHECK(std::is_sorted(t.items.begin(), t.items.end()));
            CHECK(std::adjacent_find(t.items.begin(), t.items.end()) == t.items.end());
        }
    }
}

TEST_CASE("head keeps the first transactions and compacts the dictionary") {
    const auto db = make_db({{"a", "b"}, {"c"}, {"b", "d"}});
    const auto two = db.head(2);
    CHECK(two.size() == 2);
    CHECK(two.item_count() == 3);
    CHECK(db.head(10) == db);
}
