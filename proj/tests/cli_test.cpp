#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "xling_cli.hpp"
// After the Eigen headers: the resolver header behind httplib defines _res.
#include "support/stub_server.hpp"

using namespace xling;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("xling_cli_" + name + "_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

constexpr Stance kCycle[] = {Stance::neutral, Stance::pro, Stance::anti, Stance::unrelated};

// 40 records for each of three languages; labels cycle.
std::vector<corpus::TweetRecord> synthetic_corpus() {
    std::vector<corpus::TweetRecord> out;
    for (auto lang : {Language::en, Language::es, Language::pl})
        for (int i = 0; i < 40; ++i) {
            corpus::TweetRecord r;
            r.id = std::string(to_string(lang)) + "-" + std::to_string(i);
            r.text = "refugee inmigrant uchodźca note " + r.id;
            r.language = lang;
            r.label = kCycle[i % 4];
            out.push_back(r);
        }
    return out;
}

// Fixed answer table: every fifth record (offset by language) is answered wrongly.
std::map<std::string, std::string> answer_table(const std::vector<corpus::TweetRecord>& records) {
    std::map<std::string, std::string> t;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const bool wrong = (i * 7 + static_cast<std::size_t>(r.language)) % 5 == 0;
        const Stance s = wrong ? kCycle[(static_cast<int>(i) + 1) % 4] : r.label;
        t[r.text] = std::string(to_string(s));
    }
    return t;
}

}  // namespace

TEST(Cli, UsageErrorsAreConfigErrors) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({}).code, cli::kConfig);
    EXPECT_EQ(run({"ingest", "--no-such-flag"}).code, cli::kConfig);
    EXPECT_EQ(run({"ingest", "--corpus", "/nonexistent/corpus.csv"}).code, cli::kConfig);
    EXPECT_EQ(run({"report"}).code, cli::kConfig);
    EXPECT_EQ(run({"effects", "--model", "2"}).code, cli::kConfig);
    EXPECT_EQ(run({"effects", "--model", "7"}).code, cli::kConfig);
    EXPECT_EQ(run({"split", "--corpus", "/nonexistent"}).code, cli::kConfig);
}

TEST(Cli, IngestFilterSplit) {
    TempDir d("prep");
    auto records = synthetic_corpus();
    records[3].text = "nothing relevant";
    corpus::save_corpus(d / "raw.csv", records);

    auto ingest = run({"ingest", "--corpus", d / "raw.csv", "--out", d / "clean.csv"});
    ASSERT_EQ(ingest.code, 0) << ingest.err;
    EXPECT_NE(ingest.out.find("pl"), std::string::npos);
    EXPECT_EQ(corpus::load_corpus(d / "clean.csv"), records);

    auto filter = run({"filter", "--corpus", d / "clean.csv", "--out", d / "filtered.csv"});
    ASSERT_EQ(filter.code, 0) << filter.err;
    EXPECT_EQ(corpus::load_corpus(d / "filtered.csv").size(), records.size() - 1);

    ASSERT_EQ(run({"split", "--corpus", d / "filtered.csv", "--out", d / "a.csv", "--seed", "9"}).code, 0);
    ASSERT_EQ(run({"split", "--corpus", d / "filtered.csv", "--out", d / "b.csv", "--seed", "9"}).code, 0);
    EXPECT_EQ(slurp(d / "a.csv"), slurp(d / "b.csv"));
    for (const auto& r : corpus::load_corpus(d / "a.csv")) EXPECT_TRUE(r.split.has_value());

    // The config file supplies options; flags override it.
    spit(d / "run.ini", "corpus = " + d / "filtered.csv" + "\nout = " + d / "ignored.csv" + "\nseed = 9\n");
    ASSERT_EQ(run({"split", "--config", d / "run.ini", "--out", d / "c.csv"}).code, 0);
    EXPECT_EQ(slurp(d / "a.csv"), slurp(d / "c.csv"));
    EXPECT_FALSE(fs::exists(d / "ignored.csv"));

    spit(d / "bad.csv", "id,text,language,label,split,translation_quality,translated_text\nx,hi,en,positive,,,\n");
    auto bad = run({"ingest", "--corpus", d / "bad.csv"});
    EXPECT_EQ(bad.code, cli::kData);
    EXPECT_NE(bad.err.find("positive"), std::string::npos);
}

TEST(Cli, ClassifyFitEffectsReport) {
    TempDir d("pipeline");
    const auto records = synthetic_corpus();
    corpus::save_corpus(d / "raw.csv", records);
    ASSERT_EQ(run({"split", "--corpus", d / "raw.csv", "--out", d / "corpus.csv"}).code, 0);

    const auto answers = answer_table(records);
    stub::StubServer server([&](const nlohmann::json& body) {
        return answers.at(stub::StubServer::tweet_text(body));
    });

    const std::vector<std::string> classify{"classify", "--corpus", d / "corpus.csv", "--endpoint", server.url(),
                                            "--variant", "English", "--checkpoint-dir", d / "ckpt", "--parallelism",
                                            "3"};
    auto first = run(classify);
    ASSERT_EQ(first.code, 0) << first.err;
    EXPECT_NE(first.out.find("committed=120"), std::string::npos) << first.out;
    const auto log = d / "ckpt/classify-English.jsonl";
    const auto log_bytes = slurp(log);
    auto again = run(classify);
    ASSERT_EQ(again.code, 0);
    EXPECT_NE(again.out.find("resumed=120"), std::string::npos);
    EXPECT_EQ(slurp(log), log_bytes);

    const std::vector<std::string> fit{"fit", "--corpus", d / "corpus.csv", "--predictions", log, "--model", "1",
                                       "--out", d / "m1.tsv"};
    auto f1 = run(fit);
    ASSERT_EQ(f1.code, 0) << f1.err;
    const auto table = slurp(d / "m1.tsv");
    EXPECT_EQ(table.rfind("term\testimate\tstd_error\tz\tp_value\tsignif\n(Intercept)\t", 0), 0u);
    EXPECT_NE(table.find("Language:pl"), std::string::npos);
    ASSERT_EQ(run(fit).code, 0);
    EXPECT_EQ(slurp(d / "m1.tsv"), table);

    auto short_fit = fit;
    short_fit.insert(short_fit.end(), {"--max-iterations", "1"});
    EXPECT_EQ(run(short_fit).code, cli::kNotConverged);

    // Predictions that do not belong to the corpus are a data error.
    auto other = records;
    other.resize(10);
    corpus::save_corpus(d / "small.csv", corpus::assign_splits(other, 0.75, 1));
    EXPECT_EQ(run({"fit", "--corpus", d / "small.csv", "--predictions", log, "--model", "1"}).code, cli::kData);

    auto rep = run({"report", "--coefficients", d / "m1.tsv", "--model", "1", "--predictions", log, "--corpus",
                    d / "corpus.csv"});
    ASSERT_EQ(rep.code, 0) << rep.err;
    EXPECT_NE(rep.out.find("## Model 1"), std::string::npos);
    EXPECT_NE(rep.out.find("## Accuracy by pretraining language share"), std::string::npos);
    EXPECT_EQ(rep.out.find("## Footprint"), std::string::npos);

    auto pre = run({"effects", "--predictions", log, "--corpus", d / "corpus.csv"});
    ASSERT_EQ(pre.code, 0) << pre.err;
    EXPECT_EQ(pre.out.rfind("language\tvariant\tshare_percent", 0), 0u);
}

TEST(Cli, ClassifyAgainstDeadEndpointIsTransportFailure) {
    TempDir d("dead");
    corpus::save_corpus(d / "c.csv", synthetic_corpus());
    std::string url;
    {
        stub::StubServer s([](const nlohmann::json&) { return std::string("neutral"); });
        url = s.url();
    }
    auto r = run({"classify", "--corpus", d / "c.csv", "--endpoint", url, "--checkpoint-dir", d / "ck",
                  "--max-attempts", "1", "--timeout", "2"});
    EXPECT_EQ(r.code, cli::kTransport) << r.out << r.err;
    EXPECT_NE(r.out.find("transport_failures=120"), std::string::npos);
    EXPECT_EQ(run({"classify", "--corpus", d / "c.csv", "--endpoint", "ftp://x", "--checkpoint-dir", d / "ck2"}).code,
              cli::kConfig);
}

TEST(Cli, TranslateAppliesTranslations) {
    TempDir d("translate");
    auto records = synthetic_corpus();
    corpus::save_corpus(d / "c.csv", records);
    stub::StubServer server([](const nlohmann::json& body) {
        return "EN " + body.at("messages").at(1).at("content").get<std::string>();
    });
    auto r = run({"translate", "--corpus", d / "c.csv", "--endpoint", server.url(), "--checkpoint-dir", d / "ck",
                  "--out", d / "t.csv", "--model-id", "translator"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("translated=80"), std::string::npos) << r.out;
    for (const auto& t : corpus::load_corpus(d / "t.csv")) {
        if (t.language == Language::en) {
            EXPECT_FALSE(t.translated_text);
        } else {
            ASSERT_TRUE(t.translated_text);
            EXPECT_EQ(*t.translated_text, "EN " + t.text);
            EXPECT_EQ(t.translation_quality, TranslationQuality::unknown);
        }
    }
}

TEST(Cli, EffectsFootprintAndReport) {
    TempDir d("effects");
    auto heat = run({"effects", "--model", "3", "--out", d / "heat.tsv"});
    ASSERT_EQ(heat.code, 0) << heat.err;
    EXPECT_NE(slurp(d / "heat.tsv").find("pl\tMultilanguage\t-0.16966\t-1.35079\t0.80255\t-0.71790\n"),
              std::string::npos);

    auto share = run({"effects", "--model", "4"});
    ASSERT_EQ(share.code, 0);
    EXPECT_NE(share.out.find("EnglishSpanish\t"), std::string::npos);
    EXPECT_NE(share.out.find("\t4.65000\n"), std::string::npos);

    auto fp = run({"footprint"});
    ASSERT_EQ(fp.code, 0);
    EXPECT_NE(fp.out.find("OpenAI\tGPT-4o\t1.7T\t108.0\t1017.2\t3501.3\t359\t2925000\n"), std::string::npos);
    EXPECT_NE(fp.err.find("DeepSeek Chat (V3) energy_mwh printed 5231.5"), std::string::npos);
    EXPECT_EQ(run({"footprint", "--baseline", "nope"}).code, cli::kConfig);

    const std::string catalog = std::string(XLING_DATA_DIR) + "/providers.json";
    auto a = run({"report", "--catalog", catalog, "--out", d / "a.md"});
    auto b = run({"report", "--catalog", catalog, "--out", d / "b.md"});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0);
    const auto doc = slurp(d / "a.md");
    EXPECT_EQ(doc, slurp(d / "b.md"));
    EXPECT_EQ(doc.rfind("## Footprint\n", 0), 0u);
    EXPECT_EQ(doc.find("## Model"), std::string::npos);
    EXPECT_NE(doc.find("| DeepSeek Chat (V3) | energy_mwh | 5231.5 | 4068.93 | DISCREPANCY |"), std::string::npos);

    auto full = run({"report", "--fixtures", std::string(XLING_DATA_DIR) + "/fixtures"});
    ASSERT_EQ(full.code, 0) << full.err;
    for (const char* s : {"## Model 1", "## Model 4", "Cumulative log-odds", "ShareUnrelated compounded effect",
                          "Consistency appendix", "-0.718 |"})
        EXPECT_NE(full.out.find(s), std::string::npos) << s;
}
