#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xling/corpus.hpp"
#include "xling/effects.hpp"
#include "xling/footprint.hpp"
#include "xling/glm.hpp"
#include "xling/inference.hpp"
#include "xling/inference/http.hpp"
#include "xling/report.hpp"

namespace xling::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
    kOk = 0,
    kConfig = 2,
    kData = 3,
    kTransport = 4,
    kNotConverged = 5,
};

// Every option, whether it came from a flag or from the --config file.
struct RunConfig {
    std::string command;
    std::string corpus;
    std::string out;
    std::string endpoint;
    std::string variant = "English";
    std::string checkpoint_dir = "checkpoints";
    std::vector<int> models;
    std::string fixtures;
    std::vector<std::string> coefficients;
    std::string catalog;
    std::string search_terms;
    std::vector<std::string> predictions;
    std::uint64_t seed = 42;
    std::size_t parallelism = 4;
    std::string token_env = inference::kDefaultTokenEnv;
    std::string model_id = "llama-3.2-3b-ft";
    bool use_translation = false;
    double train_fraction = 0.75;
    double items = 1e10;
    std::string baseline = "Llama 3.2 - FT";
    std::string billing = "total";
    int max_attempts = 3;
    int timeout = 60;
    int max_iterations = 100;
};

namespace detail {

inline void require_file(const std::string& path, const char* flag) {
    if (path.empty()) throw ConfigError(std::string(flag) + " is required");
    if (!fs::is_regular_file(path)) throw ConfigError(std::string(flag) + " '" + path + "' does not exist");
}

inline void require_dir(const std::string& path, const char* flag) {
    if (path.empty()) throw ConfigError(std::string(flag) + " is required");
    if (!fs::is_directory(path)) throw ConfigError(std::string(flag) + " '" + path + "' is not a directory");
}

// Writes `content` to `path`, or to `out` when no path was given.
inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    const fs::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << content;
    if (!f.flush()) throw ConfigError("cannot write '" + path + "'");
}

inline std::string corpus_text(const std::vector<corpus::TweetRecord>& records) {
    std::ostringstream s;
    corpus::write_corpus(s, records);
    return s.str();
}

inline corpus::SearchTermTable search_terms(const RunConfig& c) {
    if (c.search_terms.empty()) return corpus::default_search_terms();
    require_file(c.search_terms, "--search-terms");
    return corpus::load_search_terms(c.search_terms);
}

inline footprint::Catalog catalog(const RunConfig& c) {
    if (c.catalog.empty()) return footprint::load_catalog(std::string(XLING_DATA_DIR) + "/providers.json");
    require_file(c.catalog, "--catalog");
    return footprint::load_catalog(c.catalog);
}

inline std::string fixture_dir(const RunConfig& c) {
    const std::string dir = c.fixtures.empty() ? effects::default_fixture_dir() : c.fixtures;
    require_dir(dir, "--fixtures");
    return dir;
}

inline glm::CoefficientTable read_coefficients(const std::string& path) {
    require_file(path, "--coefficients");
    std::ifstream in(path, std::ios::binary);
    return glm::read_table(in);
}

inline std::vector<inference::PredictionRecord> load_predictions(const RunConfig& c) {
    if (c.predictions.empty()) throw ConfigError("--predictions is required");
    std::vector<inference::PredictionRecord> all;
    for (const auto& p : c.predictions) {
        require_file(p, "--predictions");
        for (auto& r : inference::successes(inference::read_result_log(p))) all.push_back(std::move(r));
    }
    return all;
}

inline std::vector<corpus::TweetRecord> load_corpus(const RunConfig& c) {
    require_file(c.corpus, "--corpus");
    return corpus::load_corpus(c.corpus);
}

inline effects::ModelId single_model(const RunConfig& c) {
    if (c.models.size() != 1) throw ConfigError("exactly one --model is required");
    return effects::model_id_from_number(c.models.front());
}

inline footprint::Billing billing(const RunConfig& c) {
    if (c.billing == "total") return footprint::Billing::total_at_input_rate;
    if (c.billing == "input") return footprint::Billing::input_at_input_rate;
    throw ConfigError("--billing must be 'total' or 'input'");
}

inline inference::CallOptions call_options(const RunConfig& c) {
    inference::CallOptions call;
    call.model = c.model_id;
    call.retry.max_attempts = c.max_attempts;
    call.use_translation = c.use_translation;
    call.retry.validate();
    return call;
}

inline std::string log_name(const RunConfig& c, ModelVariant v) {
    return "classify-" + std::string(to_string(v)) + (c.use_translation ? "-translated" : "") + ".jsonl";
}

struct FootprintRun {
    footprint::Catalog catalog;
    std::vector<footprint::FootprintReport> reports;
    std::vector<footprint::RatioRow> ratios;
    std::vector<footprint::PublishedCheck> checks;
};

inline FootprintRun run_footprint(const RunConfig& c) {
    if (!(c.items >= 0)) throw ConfigError("--items must be non-negative");
    FootprintRun run{catalog(c), {}, {}, {}};
    footprint::Workload w;
    w.item_count = static_cast<std::uint64_t>(c.items);
    std::map<std::string, footprint::FootprintReport> by_model;
    for (const auto& e : run.catalog.entries) {
        auto r = footprint::estimate_footprint(w, e.profile, billing(c));
        by_model[r.model] = r;
        for (auto& chk : footprint::check_published(e, r)) run.checks.push_back(std::move(chk));
        run.reports.push_back(std::move(r));
    }
    if (!c.baseline.empty()) run.ratios = footprint::compare(by_model, c.baseline);
    return run;
}

// Share totals followed by the accuracy curves.
inline std::string share_effects_text(const glm::CoefficientTable& t) {
    std::ostringstream s;
    s << "variant\tmodel\tshare_unrelated\tinteraction\ttotal\n";
    for (auto v : all_values<ModelVariant>()) {
        const auto r = effects::share_unrelated_total(t, v);
        s << to_string(v);
        for (const auto& comp : r.components) s << '\t' << glm::format_number(comp.value, "%.5f");
        s << '\t' << glm::format_number(r.total, "%.5f") << '\n';
    }
    s << '\n';
    effects::write_curves(s, effects::all_accuracy_curves(t, effects::share_grid()));
    return s.str();
}

// --- subcommands -----------------------------------------------------------

inline int cmd_ingest(const RunConfig& c, std::ostream& out) {
    const auto records = load_corpus(c);
    if (!c.out.empty()) emit(c.out, corpus_text(records), out);
    std::ostringstream s;
    corpus::write_summary(s, corpus::summarize(records));
    out << s.str();
    return kOk;
}

inline int cmd_filter(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto records = load_corpus(c);
    const auto table = search_terms(c);
    std::vector<corpus::TweetRecord> kept;
    for (const auto& r : records)
        if (!corpus::match_search_terms(r.text, r.language, table).empty()) kept.push_back(r);
    emit(c.out, corpus_text(kept), out);
    err << "filter: kept " << kept.size() << " of " << records.size() << " records\n";
    return kOk;
}

inline int cmd_split(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto records = load_corpus(c);
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0))
        throw ConfigError("--train-fraction must lie in (0, 1)");
    const auto split = corpus::assign_splits(records, c.train_fraction, c.seed);
    emit(c.out, corpus_text(split), out);
    for (const auto& [v, set] : corpus::build_training_sets(split))
        err << "training set " << to_string(v) << ": " << set.size() << '\n';
    return kOk;
}

inline int cmd_classify(const RunConfig& c, std::ostream& out) {
    const auto records = load_corpus(c);
    if (c.endpoint.empty()) throw ConfigError("--endpoint is required");
    if (c.parallelism == 0) throw ConfigError("--parallelism must be positive");
    const auto variant = parse_enum<ModelVariant>(c.variant);
    inference::HttpChatEndpoint ep(c.endpoint, c.token_env, c.timeout);
    const auto call = call_options(c);
    inference::CampaignOptions opt;
    opt.log_path = c.out.empty() ? fs::path(c.checkpoint_dir) / log_name(c, variant) : fs::path(c.out);
    opt.parallelism = c.parallelism;
    const auto stats = inference::run_campaign(ep, records, variant, opt, call);

    const auto entries = inference::read_result_log(opt.log_path);
    std::size_t parse_fail = 0, transport_fail = 0, new_transport = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto* f = std::get_if<inference::FailureRecord>(&entries[i]);
        if (!f) continue;
        const bool transport = f->kind == inference::FailureKind::transport;
        (transport ? transport_fail : parse_fail)++;
        if (transport && i >= stats.resumed) ++new_transport;
    }
    out << "classify\t" << to_string(variant) << "\ttotal=" << stats.total << "\tresumed=" << stats.resumed
        << "\tcommitted=" << stats.committed << "\tparse_failures=" << parse_fail
        << "\ttransport_failures=" << transport_fail << "\tlog=" << opt.log_path.string() << '\n';
    // Every item this run touched failed to reach the endpoint.
    if (stats.committed > 0 && new_transport == stats.committed) return kTransport;
    return kOk;
}

inline int cmd_translate(const RunConfig& c, std::ostream& out) {
    auto records = load_corpus(c);
    if (c.endpoint.empty()) throw ConfigError("--endpoint is required");
    if (c.out.empty()) throw ConfigError("--out is required");
    if (c.parallelism == 0) throw ConfigError("--parallelism must be positive");
    std::vector<corpus::TweetRecord> pending;
    for (const auto& r : records)
        if (r.language != Language::en && !r.translated_text) pending.push_back(r);
    inference::HttpChatEndpoint ep(c.endpoint, c.token_env, c.timeout);
    inference::CampaignOptions opt;
    opt.log_path = fs::path(c.checkpoint_dir) / "translate.jsonl";
    opt.parallelism = c.parallelism;
    const auto stats = inference::run_translation_campaign(ep, pending, opt, call_options(c));

    std::map<std::string, inference::TranslationRecord> done;
    std::size_t failures = 0, new_transport = 0, i = 0;
    for (const auto& e : inference::read_translation_log(opt.log_path)) {
        if (const auto* t = std::get_if<inference::TranslationRecord>(&e)) {
            done.emplace(t->tweet_id, *t);
        } else {
            ++failures;
            if (std::get<inference::FailureRecord>(e).kind == inference::FailureKind::transport && i >= stats.resumed)
                ++new_transport;
        }
        ++i;
    }
    for (auto& r : records)
        if (auto it = done.find(r.id); it != done.end()) r = inference::apply_translation(r, it->second);
    emit(c.out, corpus_text(records), out);
    out << "translate\ttotal=" << stats.total << "\tresumed=" << stats.resumed << "\tcommitted=" << stats.committed
        << "\ttranslated=" << done.size() << "\tfailures=" << failures << "\tlog=" << opt.log_path.string() << '\n';
    if (stats.committed > 0 && new_transport == stats.committed) return kTransport;
    return kOk;
}

inline int cmd_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto id = single_model(c);
    const auto records = load_corpus(c);
    const auto preds = load_predictions(c);
    const auto rows = effects::build_observations(preds, records);
    glm::FitOptions fo;
    fo.max_iterations = c.max_iterations;
    if (fo.max_iterations < 1) throw ConfigError("--max-iterations must be positive");
    const auto fit = glm::fit_logistic(glm::encode_design(rows, effects::make_spec(id)), fo);
    for (const auto& w : fit.warnings) err << "warning: " << w << '\n';
    std::ostringstream s;
    glm::write_table(s, fit.coefficients);
    emit(c.out, s.str(), out);
    if (!fit.converged) {
        err << "error: " << effects::model_title(id) << " did not converge\n";
        return kNotConverged;
    }
    return kOk;
}

inline int cmd_effects(const RunConfig& c, std::ostream& out) {
    if (c.models.empty() && !c.predictions.empty()) {
        const auto a = effects::accuracy_by_pretraining_share(load_predictions(c), load_corpus(c),
                                                              effects::default_pretrain_shares());
        std::ostringstream s;
        effects::write_pretrain_analysis(s, a);
        emit(c.out, s.str(), out);
        return kOk;
    }
    const auto id = single_model(c);
    const auto table = c.coefficients.empty() ? effects::load_fixture(id, fixture_dir(c))
                                              : read_coefficients(c.coefficients.front());
    std::ostringstream s;
    if (id == effects::ModelId::M3)
        effects::write_heatmap(s, effects::model_language_heatmap(table));
    else if (id == effects::ModelId::M4)
        s << share_effects_text(table);
    else
        throw ConfigError("effects are defined for models 3 and 4");
    emit(c.out, s.str(), out);
    return kOk;
}

inline int cmd_footprint(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto run = run_footprint(c);
    std::ostringstream s;
    footprint::write_footprint_table(s, run.catalog, run.reports);
    if (!c.baseline.empty()) {
        s << '\n';
        footprint::write_ratio_table(s, c.baseline, run.ratios);
    }
    emit(c.out, s.str(), out);
    for (const auto& chk : run.checks)
        if (!chk.reproduced)
            err << "note: " << chk.model << ' ' << chk.quantity << " printed " << chk.printed << ", computed "
                << glm::format_number(chk.computed, "%.2f") << '\n';
    return kOk;
}

inline int cmd_report(const RunConfig& c, std::ostream& out) {
    report::ReportInputs in;
    auto add_model = [&](effects::ModelId id, const glm::CoefficientTable& t, bool fixture) {
        in.coefficients.push_back({std::string(effects::model_title(id)), t});
        if (id == effects::ModelId::M3) {
            in.model_language = t;
            if (fixture)
                for (auto& k : effects::cumulative_checks(t)) in.checks.push_back(std::move(k));
        }
        if (id == effects::ModelId::M4) {
            in.share_model = t;
            if (fixture)
                for (auto& k : effects::share_total_checks(t)) in.checks.push_back(std::move(k));
        }
        if (fixture)
            for (auto& r : effects::fixture_remarks(id, t)) in.remarks.push_back(std::move(r));
    };

    if (!c.coefficients.empty()) {
        if (c.models.size() != c.coefficients.size())
            throw ConfigError("give one --model per --coefficients file");
        for (std::size_t i = 0; i < c.models.size(); ++i)
            add_model(effects::model_id_from_number(c.models[i]), read_coefficients(c.coefficients[i]), false);
    } else if (!c.fixtures.empty() || !c.models.empty()) {
        const auto dir = fixture_dir(c);
        std::vector<int> ids = c.models.empty() ? std::vector<int>{1, 2, 3, 4} : c.models;
        for (int n : ids) {
            const auto id = effects::model_id_from_number(n);
            add_model(id, effects::load_fixture(id, dir), true);
        }
    }
    if (!c.predictions.empty())
        in.pretrain = effects::accuracy_by_pretraining_share(load_predictions(c), load_corpus(c),
                                                             effects::default_pretrain_shares());
    if (!c.catalog.empty()) {
        auto run = run_footprint(c);
        in.footprint = report::FootprintSection{run.catalog, run.reports, c.baseline, run.ratios};
        for (auto& chk : run.checks)
            if (!chk.reproduced) in.published.push_back(std::move(chk));
    }
    if (in.coefficients.empty() && !in.pretrain && !in.footprint)
        throw ConfigError("report needs at least one input (--fixtures, --coefficients, --predictions or --catalog)");
    emit(c.out, report::render_report(in), out);
    return kOk;
}

} // namespace detail

inline int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
    using namespace detail;
    if (c.command == "ingest") return cmd_ingest(c, out);
    if (c.command == "filter") return cmd_filter(c, out, err);
    if (c.command == "split") return cmd_split(c, out, err);
    if (c.command == "classify") return cmd_classify(c, out);
    if (c.command == "translate") return cmd_translate(c, out);
    if (c.command == "fit") return cmd_fit(c, out, err);
    if (c.command == "effects") return cmd_effects(c, out);
    if (c.command == "footprint") return cmd_footprint(c, out, err);
    if (c.command == "report") return cmd_report(c, out);
    throw ConfigError("unknown command '" + c.command + "'");
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Cross-lingual stance classification pipeline"};
    app.set_config("--config", "", "key = value configuration file; flags override it");
    app.require_subcommand(1);
    app.add_option("--corpus", c.corpus, "corpus file (csv or tsv with header)");
    app.add_option("--out", c.out, "output file; stdout when omitted");
    app.add_option("--endpoint", c.endpoint, "chat-completion base URL");
    app.add_option("--variant", c.variant, "English | Spanish | EnglishSpanish | Multilanguage");
    app.add_option("--checkpoint-dir", c.checkpoint_dir, "campaign log and checkpoint directory");
    app.add_option("--model", c.models, "regression model id (1-4); repeatable for report");
    app.add_option("--fixtures", c.fixtures, "coefficient fixture directory");
    app.add_option("--coefficients", c.coefficients, "fitted coefficient table(s)");
    app.add_option("--catalog", c.catalog, "provider catalog (json)");
    app.add_option("--search-terms", c.search_terms, "search term table (json)");
    app.add_option("--predictions", c.predictions, "classification result log(s)");
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--parallelism", c.parallelism, "concurrent endpoint calls");
    app.add_option("--token-env", c.token_env, "environment variable holding the bearer token");
    app.add_option("--model-id", c.model_id, "model identifier sent to the endpoint");
    app.add_flag("--use-translation", c.use_translation, "classify translated text where available");
    app.add_option("--train-fraction", c.train_fraction, "per-language train share");
    app.add_option("--items", c.items, "footprint workload size");
    app.add_option("--baseline", c.baseline, "footprint ratio baseline");
    app.add_option("--billing", c.billing, "total | input");
    app.add_option("--max-attempts", c.max_attempts, "attempts per item");
    app.add_option("--timeout", c.timeout, "HTTP timeout in seconds");
    app.add_option("--max-iterations", c.max_iterations, "fit iteration limit");

    const std::pair<const char*, const char*> commands[] = {
        {"ingest", "validate a corpus and print its summary"},
        {"filter", "keep records matching the search terms"},
        {"split", "assign train/test splits per language"},
        {"classify", "run a resumable classification campaign"},
        {"translate", "translate non-English records"},
        {"fit", "fit a regression model on campaign results"},
        {"effects", "compose effects from a coefficient table"},
        {"footprint", "estimate energy, water, CO2 and cost"},
        {"report", "render a markdown report"},
    };
    for (const auto& [name, desc] : commands) {
        app.add_subcommand(name, desc)->fallthrough()->callback([&c, n = name] { c.command = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfig;
    }

    try {
        return dispatch(c, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const RankDeficiency& e) {
        err << "data error: " << e.what() << '\n';
        return kData;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kData;
    } catch (const TransportError& e) {
        err << "transport error: " << e.what() << '\n';
        return kTransport;
    } catch (const NotConverged& e) {
        err << "error: " << e.what() << '\n';
        return kNotConverged;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"xling"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace xling::cli
