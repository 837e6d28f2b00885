#include "hoi/body/test_body.hpp"
#include "hoi/priors/live_client.hpp"
#include "hoi/priors/priors.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <thread>

using namespace hoi;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "hoi_priors_test";
    std::filesystem::create_directories(dir);
    auto p = dir / name;
    std::filesystem::remove(p);
    return p;
}

template <class F>
ErrorKind error_kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no hoi::Error thrown";
    return ErrorKind::Io;
}

/// In-memory completions keyed by prompt.
class MapClient : public CompletionClient {
public:
    std::map<std::string, std::string> responses;
    int calls = 0;
    std::string complete(std::string_view, const std::string& prompt) override {
        ++calls;
        auto it = responses.find(prompt);
        if (it == responses.end()) fail(ErrorKind::CacheMiss, "no response");
        return it->second;
    }
    std::string model() const override { return "map"; }
};

const std::filesystem::path kFixture = std::filesystem::path(HOI_DATA_DIR) / "priors" / "fixture_cache.jsonl";

}  // namespace

TEST(Templates, MatchPromptAssets) {
    EXPECT_EQ(kObjectSizeTemplate, read_file(std::filesystem::path(HOI_DATA_DIR) / "prompts" / "object_size.txt"));
    EXPECT_EQ(kContactTemplate, read_file(std::filesystem::path(HOI_DATA_DIR) / "prompts" / "contacts.txt"));
}

TEST(Templates, RenderSubstitutesQuerySlotOnly) {
    const std::string size = render_size_prompt("chair");
    EXPECT_EQ(size, "This is an object length estimator.\nLength of a bike: 1.75m\nHeight of a woman: 1.63m\nLength of a chair:");

    const std::string contact = render_contact_prompt("stand on", "chair");
    const std::string tail = "Action: stand on\nObject: chair\nContacts:";
    ASSERT_GE(contact.size(), tail.size());
    EXPECT_EQ(contact.substr(contact.size() - tail.size()), tail);
    const std::string prefix(kContactTemplate.substr(0, kContactTemplate.size() - std::string("Action: ACTION\nObject: OBJECT\nContacts:").size()));
    EXPECT_EQ(contact.substr(0, prefix.size()), prefix);
    EXPECT_EQ(error_kind_of([] { render_size_prompt(""); }), ErrorKind::InvalidInput);
    EXPECT_EQ(error_kind_of([] { render_contact_prompt("sit", ""); }), ErrorKind::InvalidInput);
}

TEST(PromptCache, Fnv1aReferenceValues) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ull);
    EXPECT_NE(prompt_cache_key("p", "m1"), prompt_cache_key("p", "m2"));
    EXPECT_NE(prompt_cache_key("ab", "c"), prompt_cache_key("a", "bc"));
}

TEST(PromptCache, AppendReloadAndShadow) {
    const auto path = temp_path("cache.jsonl");
    {
        PromptCache cache(path);
        cache.append({"object-size", "p1", "r1", "m", "t"});
        cache.append({"object-size", "p2", "r2", "m", "t"});
        cache.append({"object-size", "p1", "r1b", "m", "t"});
        EXPECT_EQ(cache.size(), 2u);
    }
    PromptCache reloaded(path);
    EXPECT_EQ(reloaded.size(), 2u);
    EXPECT_EQ(reloaded.lookup("p1", "m")->response, "r1b");
    EXPECT_FALSE(reloaded.lookup("p1", "other"));
    // append-only: all three lines are on disk
    std::ifstream in(path);
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 3);
}

TEST(PromptCache, RejectsCorruptRecords) {
    const auto path = temp_path("corrupt.jsonl");
    std::ofstream(path) << "{\"prompt\": \"p\", \"response\": \"r\", \"model\": \"m\", \"key\": \"0000000000000000\"}\n";
    EXPECT_EQ(error_kind_of([&] { PromptCache c(path); }), ErrorKind::InvalidInput);
    std::ofstream(path) << "not json\n";
    EXPECT_EQ(error_kind_of([&] { PromptCache c(path); }), ErrorKind::InvalidInput);
}

TEST(PromptCache, ConcurrentReadersAndWriters) {
    PromptCache cache;
    std::atomic<bool> bad{false};
    std::vector<std::thread> threads;
    for (int w = 0; w < 2; ++w)
        threads.emplace_back([&, w] {
            for (int i = 0; i < 200; ++i)
                cache.append({"t", "w" + std::to_string(w) + "_" + std::to_string(i), std::to_string(i), "m", ""});
        });
    for (int r = 0; r < 3; ++r)
        threads.emplace_back([&] {
            for (int i = 0; i < 2000; ++i)
                if (auto hit = cache.lookup("w0_" + std::to_string(i % 200), "m"); hit && hit->response != std::to_string(i % 200))
                    bad = true;
        });
    for (auto& t : threads) t.join();
    EXPECT_FALSE(bad);
    EXPECT_EQ(cache.size(), 400u);
}

TEST(SizeParser, Examples) {
    EXPECT_DOUBLE_EQ(parse_size_response(" 0.85m"), 0.85);
    EXPECT_DOUBLE_EQ(parse_size_response("about 0.75 m tall"), 0.75);
    EXPECT_DOUBLE_EQ(parse_size_response(" 2m\nLength of a bike: 1.75m"), 2.0);
    EXPECT_DOUBLE_EQ(parse_size_response("roughly 1.2 meters"), 1.2);
    EXPECT_DOUBLE_EQ(parse_size_response("3 mice, 0.4m"), 0.4);
    try {
        parse_size_response("fairly big");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("fairly big"), std::string::npos);
    }
    EXPECT_EQ(error_kind_of([] { parse_size_response("75cm"); }), ErrorKind::ParseError);
}

TEST(SizeParser, AgreesWithRegexOracle) {
    const std::regex oracle(R"((?:^|[^0-9.])([0-9]+(?:\.[0-9]+)?)[ \t]*(?:meters|metres|meter|metre|m)(?![A-Za-z]))");
    const std::string alphabet = "0123456789.. \tmmmetrsax\nc";
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> len(0, 16), pick(0, static_cast<int>(alphabet.size()) - 1);
    int parsed = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        std::string s;
        for (int n = len(rng); n > 0; --n) s += alphabet[pick(rng)];
        std::smatch m;
        const bool expect = std::regex_search(s, m, oracle);
        try {
            const double v = parse_size_response(s);
            ASSERT_TRUE(expect) << "'" << s << "'";
            ASSERT_EQ(v, std::stod(m[1].str())) << "'" << s << "'";
            ++parsed;
        } catch (const Error& e) {
            ASSERT_EQ(e.kind(), ErrorKind::ParseError);
            ASSERT_FALSE(expect) << "'" << s << "'";
        }
    }
    EXPECT_GT(parsed, 500);
}

TEST(ContactParser, Examples) {
    const auto two = parse_contact_response("seat/butt, back/back");
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0], (ContactPair{"seat", "butt"}));
    EXPECT_EQ(two[1], (ContactPair{"back", "back"}));

    const auto wrapped = parse_contact_response(" handlebar/hands, seat/butt, \n          paddle/foot\n\nAction: walk");
    ASSERT_EQ(wrapped.size(), 3u);
    EXPECT_EQ(wrapped[2], (ContactPair{"paddle", "foot"}));

    const auto cut = parse_contact_response(" seat/butt\nAction: stand\nObject: sofa\nContacts: seat/foot");
    ASSERT_EQ(cut.size(), 1u);

    const auto noisy = parse_contact_response("\n tabletop / left leg ,junk, a/b/c, key/hands.");
    ASSERT_EQ(noisy.size(), 2u);
    EXPECT_EQ(noisy[0], (ContactPair{"tabletop", "left leg"}));
    EXPECT_EQ(noisy[1], (ContactPair{"key", "hands"}));

    try {
        parse_contact_response(" nothing useful");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("nothing useful"), std::string::npos);
    }
}

TEST(Normalize, SynonymExactAndUnmapped) {
    PartVocabulary body{{"hips", "hands"}, {{"butt", "hips"}}};
    PartVocabulary object{{"chair seat", "chair back"}, {{"seat", "chair seat"}}};
    InteractionMap m{"sit", "chair", {{"chair seat", "butt"}, {"florb", "hands"}, {"seat", "hands"}}};
    std::vector<DroppedPair> dropped;
    const auto out = normalize_part_labels(m, object, body, {nullptr, &dropped});
    ASSERT_EQ(out.pairs.size(), 2u);
    EXPECT_EQ(out.pairs[0], (ContactPair{"chair seat", "hips"}));
    EXPECT_EQ(out.pairs[1], (ContactPair{"chair seat", "hands"}));
    ASSERT_EQ(dropped.size(), 1u);
    EXPECT_EQ(dropped[0].reason, "unmapped");
    EXPECT_EQ(dropped[0].pair.object_part, "florb");

    InteractionMap none{"sit", "chair", {{"florb", "hips"}}};
    EXPECT_EQ(error_kind_of([&] { normalize_part_labels(none, object, body); }), ErrorKind::NormalizationFailure);
    EXPECT_EQ(error_kind_of([&] { normalize_part_labels(m, PartVocabulary{}, body); }), ErrorKind::InvalidInput);
}

TEST(Normalize, CaseBlanksAndDuplicates) {
    const auto out = normalize_part_labels({"sit", "chair", {{"Chair_Seat", "BUTT"}, {"seat", "bottom"}, {"back", "spine"}}},
                                           object_vocabulary("chair"), body_vocabulary());
    ASSERT_EQ(out.pairs.size(), 2u);
    EXPECT_EQ(out.pairs[0], (ContactPair{"chair seat", "butt"}));
    EXPECT_EQ(out.pairs[1], (ContactPair{"chair back", "back"}));
}

TEST(Normalize, MappingPromptFallback) {
    const auto object = object_vocabulary("chair");
    MapClient mapper;
    mapper.responses[render_part_mapping_prompt("cushion", "chair seat, chair back, chair arms, chair base")] = " chair seat\nPart: x";
    const auto out = normalize_part_labels({"sit", "chair", {{"cushion", "butt"}, {"florb", "butt"}}}, object,
                                           body_vocabulary(), {&mapper});
    ASSERT_EQ(out.pairs.size(), 1u);
    EXPECT_EQ(out.pairs[0], (ContactPair{"chair seat", "butt"}));
    EXPECT_GT(mapper.calls, 0);
}

TEST(Normalize, IdempotentOnRandomMaps) {
    std::mt19937_64 rng(5);
    const std::vector<std::string> categories = {"chair", "table", "backpack", "suitcase", "scissors", "keyboard", "bowl"};
    const auto body = body_vocabulary();
    std::vector<std::string> body_words = body.labels;
    for (const auto& [k, v] : body.synonyms) body_words.push_back(k);
    body_words.push_back("florb");
    for (int trial = 0; trial < 300; ++trial) {
        const std::string cat = categories[rng() % categories.size()];
        const auto object = object_vocabulary(cat);
        std::vector<std::string> obj_words = object.labels;
        for (const auto& [k, v] : object.synonyms) obj_words.push_back(k);
        obj_words.push_back("zorp");
        InteractionMap m{"act", cat, {}};
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) m.pairs.push_back({obj_words[rng() % obj_words.size()], body_words[rng() % body_words.size()]});
        m.pairs.push_back({object.labels[0], body.labels[rng() % body.labels.size()]});
        const auto once = normalize_part_labels(m, object, body);
        const auto twice = normalize_part_labels(once, object, body);
        ASSERT_EQ(once.pairs, twice.pairs);
        for (const auto& p : once.pairs) {
            ASSERT_TRUE(object.contains(p.object_part));
            ASSERT_TRUE(body.contains(p.body_part));
        }
    }
}

TEST(Vocabulary, BodyLabelsAreRegionsOfBuiltinBody) {
    ArticulatedTestBody body;
    const auto regions = body.vocabulary();
    std::set<std::string> a(regions.begin(), regions.end()), b(body_part_labels().begin(), body_part_labels().end());
    EXPECT_EQ(a, b);
    for (const auto& [from, to] : body_part_synonyms()) EXPECT_TRUE(b.count(to)) << from;
    EXPECT_EQ(error_kind_of([] { object_vocabulary("spaceship"); }), ErrorKind::InvalidInput);
}

TEST(Queries, SizeSanityAndMiss) {
    MapClient client;
    client.responses[render_size_prompt("planet")] = " 12742000m";
    client.responses[render_size_prompt("atom")] = " 0.0000001m";
    client.responses[render_size_prompt("lamp")] = " about 1.5 m tall";
    EXPECT_EQ(error_kind_of([&] { query_object_size("planet", client); }), ErrorKind::SanityError);
    EXPECT_EQ(error_kind_of([&] { query_object_size("atom", client); }), ErrorKind::SanityError);
    EXPECT_DOUBLE_EQ(query_object_size("lamp", client).size, 1.5);
    EXPECT_EQ(error_kind_of([&] { query_object_size("vase", client); }), ErrorKind::CacheMiss);
    EXPECT_EQ(error_kind_of([&] { query_object_size("", client); }), ErrorKind::InvalidInput);
}

TEST(Queries, FixtureExamples) {
    PromptCache cache(kFixture, false);
    ReplayClient client(cache, std::string(kDefaultCompletionModel));
    EXPECT_DOUBLE_EQ(query_object_size("chair", client).size, 0.85);
    EXPECT_DOUBLE_EQ(query_object_size("bed", client).size, 2.0);
    const auto sit = query_contacts("sit", "chair", client);
    ASSERT_EQ(sit.pairs.size(), 2u);
    EXPECT_EQ(sit.pairs[0], (ContactPair{"chair seat", "butt"}));
    EXPECT_EQ(sit.pairs[1], (ContactPair{"chair back", "back"}));
    const auto type = query_contacts("type", "keyboard", client);
    ASSERT_EQ(type.pairs.size(), 1u);
    EXPECT_EQ(type.pairs[0], (ContactPair{"key", "hands"}));
    EXPECT_EQ(error_kind_of([&] { query_contacts("juggle", "chair", client); }), ErrorKind::CacheMiss);
}

TEST(Votes, Thresholds) {
    EXPECT_EQ(classify_votes(7), VoteClass::Correct);
    EXPECT_EQ(classify_votes(5), VoteClass::Uncertain);
    EXPECT_EQ(classify_votes(3), VoteClass::Incorrect);
    EXPECT_EQ(error_kind_of([] { classify_votes(11); }), ErrorKind::InvalidInput);
    EXPECT_EQ(error_kind_of([] { classify_votes(-1); }), ErrorKind::InvalidInput);
}

namespace {

struct FakeCompletionServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> requests{0};
    std::string last_body, last_auth;
    int status = 200;

    explicit FakeCompletionServer(std::string text) {
        server.Post("/v1/completions", [this, text](const httplib::Request& req, httplib::Response& res) {
            ++requests;
            last_body = req.body;
            last_auth = req.get_header_value("Authorization");
            res.status = status;
            res.set_content(nlohmann::json{{"choices", {{{"text", text}}}}}.dump(), "application/json");
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~FakeCompletionServer() {
        server.stop();
        thread.join();
    }
};

}  // namespace

TEST(LiveClient, RecordThenReplayIsIdentical) {
    FakeCompletionServer fake(" seat/butt, back/back\n\nAction: stand");
    const auto path = temp_path("live.jsonl");
    setenv("HOI_TEST_LLM_KEY", "secret", 1);
    LiveClientConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(fake.port);
    config.api_key_env = "HOI_TEST_LLM_KEY";
    config.min_interval = std::chrono::milliseconds(0);
    InteractionMap live_map;
    {
        PromptCache cache(path);
        LiveClient live(config, cache);
        live_map = query_contacts("sit", "chair", live);
        EXPECT_EQ(fake.requests.load(), 1);
        query_contacts("sit", "chair", live);  // served from cache
        EXPECT_EQ(fake.requests.load(), 1);
    }
    const auto body = nlohmann::json::parse(fake.last_body);
    EXPECT_EQ(body["prompt"], render_contact_prompt("sit", "chair"));
    EXPECT_EQ(body["model"], config.model);
    EXPECT_EQ(body["temperature"], 0.0);
    EXPECT_EQ(fake.last_auth, "Bearer secret");

    PromptCache reloaded(path, false);
    ReplayClient replay(reloaded, config.model);
    const auto replay_map = query_contacts("sit", "chair", replay);
    EXPECT_EQ(replay_map.pairs, live_map.pairs);
    EXPECT_EQ(replay.complete("contacts", render_contact_prompt("sit", "chair")), " seat/butt, back/back\n\nAction: stand");
}

TEST(LiveClient, NetworkFlagAndHttpErrors) {
    FakeCompletionServer fake(" 0.85m");
    PromptCache cache;
    LiveClientConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(fake.port);
    config.min_interval = std::chrono::milliseconds(0);
    config.allow_network = false;
    LiveClient offline(config, cache);
    EXPECT_EQ(error_kind_of([&] { query_object_size("chair", offline); }), ErrorKind::CacheMiss);
    EXPECT_EQ(fake.requests.load(), 0);

    config.allow_network = true;
    fake.status = 500;
    LiveClient online(config, cache);
    EXPECT_EQ(error_kind_of([&] { query_object_size("chair", online); }), ErrorKind::Network);
    EXPECT_EQ(cache.size(), 0u);
}

TEST(LiveClient, RateLimitSpacesRequests) {
    FakeCompletionServer fake(" 0.5m");
    PromptCache cache;
    LiveClientConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(fake.port);
    config.min_interval = std::chrono::milliseconds(80);
    LiveClient live(config, cache);
    const auto t0 = std::chrono::steady_clock::now();
    query_object_size("bag", live);
    query_object_size("hat", live);
    query_object_size("cup", live);
    EXPECT_GE(std::chrono::steady_clock::now() - t0, std::chrono::milliseconds(160));
    EXPECT_EQ(fake.requests.load(), 3);
}
