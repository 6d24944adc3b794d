#pragma once

#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "xling/corpus/record.hpp"
#include "xling/error.hpp"
#include "xling/inference/classify.hpp"
#include "xling/inference/endpoint.hpp"
#include "xling/inference/record.hpp"

namespace xling::inference {

namespace fs = std::filesystem;

// Progress marker kept next to the log. The committed items are always the
// first `committed` input records, and the log holds exactly their lines in
// its first `log_bytes` bytes.
struct Checkpoint {
    std::string campaign_id;
    std::uint64_t committed = 0;
    std::uint64_t log_bytes = 0;
};

inline fs::path checkpoint_path(const fs::path& log) { return fs::path(log.string() + ".ckpt"); }

inline std::optional<Checkpoint> load_checkpoint(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        const auto j = nlohmann::json::parse(in);
        return Checkpoint{j.at("campaign_id").get<std::string>(), j.at("committed").get<std::uint64_t>(),
                          j.at("log_bytes").get<std::uint64_t>()};
    } catch (const nlohmann::json::exception& e) {
        throw DataError("corrupt checkpoint '" + path.string() + "': " + e.what());
    }
}

// Write-new-then-rename, so a reader sees either the old or the new marker.
inline void write_checkpoint(const fs::path& path, const Checkpoint& c) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write checkpoint '" + tmp.string() + "'");
        nlohmann::ordered_json j;
        j["campaign_id"] = c.campaign_id;
        j["committed"] = c.committed;
        j["log_bytes"] = c.log_bytes;
        out << j.dump() << '\n';
        out.flush();
        if (!out) throw ConfigError("cannot write checkpoint '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw ConfigError("cannot commit checkpoint '" + path.string() + "': " + ec.message());
}

// Identity of a campaign: its configuration tag plus the ordered input ids.
inline std::string campaign_id(const std::string& tag, const std::vector<corpus::TweetRecord>& records) {
    std::uint64_t h = fnv1a64(tag);
    for (const auto& r : records) {
        h = fnv1a64("\n", h);
        h = fnv1a64(r.id, h);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct CampaignOptions {
    fs::path log_path;
    std::size_t parallelism = 4;
    // Fault-injection points, called on the committing thread with the number
    // of committed items: after the log line is written and after the
    // checkpoint is renamed into place.
    std::function<void(std::size_t)> after_append{};
    std::function<void(std::size_t)> after_commit{};
};

struct CampaignStats {
    std::size_t total = 0;
    std::size_t resumed = 0;    // already committed when the run started
    std::size_t committed = 0;  // committed by this run
};

// Produces the log line for one record. Must be safe to call concurrently.
using Job = std::function<nlohmann::ordered_json(const corpus::TweetRecord&)>;

inline std::vector<std::string> read_log_lines(const fs::path& path) {
    std::vector<std::string> out;
    std::ifstream in(path, std::ios::binary);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

namespace detail {

// Restores the log to the checkpointed prefix and returns the committed count.
inline Checkpoint resume_state(const std::vector<corpus::TweetRecord>& records, const std::string& id,
                               const fs::path& log, const fs::path& ckpt_path) {
    auto ckpt = load_checkpoint(ckpt_path);
    if (!ckpt) {
        std::error_code ec;
        if (fs::exists(log) && fs::file_size(log, ec) > 0)
            throw ConfigError("result log '" + log.string() + "' exists without a checkpoint; refusing to overwrite");
        if (log.has_parent_path()) fs::create_directories(log.parent_path(), ec);
        Checkpoint fresh{id, 0, 0};
        write_checkpoint(ckpt_path, fresh);
        std::ofstream out(log, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot create result log '" + log.string() + "'");
        return fresh;
    }
    if (ckpt->campaign_id != id)
        throw ConfigError("checkpoint '" + ckpt_path.string() + "' belongs to a different campaign");
    if (ckpt->committed > records.size()) throw DataError("checkpoint counts more items than the input holds");
    std::error_code ec;
    const auto size = fs::exists(log) ? fs::file_size(log, ec) : 0;
    if (size < ckpt->log_bytes) throw DataError("result log '" + log.string() + "' is shorter than its checkpoint");
    fs::resize_file(log, ckpt->log_bytes, ec);
    if (ec) throw ConfigError("cannot truncate result log: " + ec.message());
    const auto lines = read_log_lines(log);
    if (lines.size() != ckpt->committed) throw DataError("result log line count disagrees with its checkpoint");
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string got;
        try {
            got = nlohmann::json::parse(lines[i]).at("id").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw DataError("unreadable result log line", i + 1);
        }
        if (got != records[i].id) throw DataError("result log is not a prefix of the input", i + 1);
    }
    return *ckpt;
}

} // namespace detail

// Runs `job` over every record with at most `parallelism` in flight and
// commits results in input order. Interrupting the process at any point and
// rerunning with the same inputs continues from the last commit.
inline CampaignStats run_jobs(const std::vector<corpus::TweetRecord>& records, const std::string& tag, const Job& job,
                              const CampaignOptions& opt) {
    if (opt.log_path.empty()) throw ConfigError("campaign needs a result log path");
    if (opt.parallelism == 0) throw ConfigError("parallelism must be at least 1");
    {
        std::unordered_set<std::string> seen;
        for (const auto& r : records)
            if (!seen.insert(r.id).second) throw DataError("duplicate id '" + r.id + "' in campaign input");
    }
    const fs::path ckpt_path = checkpoint_path(opt.log_path);
    Checkpoint ckpt = detail::resume_state(records, campaign_id(tag, records), opt.log_path, ckpt_path);

    CampaignStats stats{records.size(), static_cast<std::size_t>(ckpt.committed), 0};
    const std::size_t total = records.size();
    const std::size_t start = stats.resumed;
    if (start == total) return stats;

    std::ofstream log(opt.log_path, std::ios::binary | std::ios::app);
    if (!log) throw ConfigError("cannot open result log '" + opt.log_path.string() + "'");

    std::mutex m;
    std::condition_variable cv;
    std::map<std::size_t, std::string> ready;
    std::size_t next = start;
    std::size_t commit_index = start;
    bool stop = false;
    std::exception_ptr failure;
    const std::size_t window = opt.parallelism * 4;

    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::unique_lock lk(m);
                cv.wait(lk, [&] { return stop || next >= total || next < commit_index + window; });
                if (stop || next >= total) return;
                i = next++;
            }
            std::string line;
            try {
                auto j = job(records[i]);
                if (!j.contains("id") || j["id"] != records[i].id) throw Error("job produced a line for another id");
                line = j.dump();
            } catch (...) {
                std::lock_guard lk(m);
                if (!failure) failure = std::current_exception();
                stop = true;
                cv.notify_all();
                return;
            }
            std::lock_guard lk(m);
            ready.emplace(i, std::move(line));
            cv.notify_all();
        }
    };

    struct Pool {
        std::vector<std::thread> threads;
        std::mutex& m;
        std::condition_variable& cv;
        bool& stop;
        ~Pool() {
            {
                std::lock_guard lk(m);
                stop = true;
            }
            cv.notify_all();
            for (auto& t : threads) t.join();
        }
    } pool{{}, m, cv, stop};
    for (std::size_t t = 0; t < std::min(opt.parallelism, total - start); ++t) pool.threads.emplace_back(worker);

    for (std::size_t i = start; i < total; ++i) {
        std::string line;
        {
            std::unique_lock lk(m);
            cv.wait(lk, [&] { return ready.contains(i) || failure; });
            if (failure) std::rethrow_exception(failure);
            line = std::move(ready.at(i));
            ready.erase(i);
            commit_index = i + 1;
        }
        cv.notify_all();
        line.push_back('\n');
        log.write(line.data(), static_cast<std::streamsize>(line.size()));
        log.flush();
        if (!log) throw ConfigError("cannot append to result log '" + opt.log_path.string() + "'");
        if (opt.after_append) opt.after_append(i + 1);
        ckpt.committed = i + 1;
        ckpt.log_bytes += line.size();
        write_checkpoint(ckpt_path, ckpt);
        ++stats.committed;
        if (opt.after_commit) opt.after_commit(i + 1);
    }
    return stats;
}

inline std::string classify_tag(ModelVariant variant, const CallOptions& call) {
    return "classify|" + std::string(to_string(variant)) + "|" + call.model + "|" + std::string(kClassifyPromptVersion) +
           (call.use_translation ? "|translated" : "");
}

// Classification campaign: one log entry per record, success or recorded failure.
inline CampaignStats run_campaign(ChatEndpoint& ep, const std::vector<corpus::TweetRecord>& records,
                                  ModelVariant variant, const CampaignOptions& opt, const CallOptions& call = {}) {
    Job job = [&](const corpus::TweetRecord& r) {
        try {
            return to_json(classify(ep, r, variant, call));
        } catch (const TransportError& e) {
            return to_json(ResultEntry(FailureRecord{r.id, variant, FailureKind::transport, e.what(), "",
                                                     std::string(kClassifyPromptVersion), call.retry.max_attempts}));
        }
    };
    return run_jobs(records, classify_tag(variant, call), job, opt);
}

// Translation campaign over non-English records.
inline CampaignStats run_translation_campaign(ChatEndpoint& ep, const std::vector<corpus::TweetRecord>& records,
                                              const CampaignOptions& opt, const CallOptions& call = {}) {
    for (const auto& r : records)
        if (r.language == Language::en) throw DataError("record '" + r.id + "' is already English");
    Job job = [&](const corpus::TweetRecord& r) {
        try {
            return translation_to_json(translate(ep, r, call));
        } catch (const TransportError& e) {
            return translation_to_json(TranslationEntry(FailureRecord{r.id, ModelVariant::English, FailureKind::transport,
                                                          e.what(), "", std::string(kTranslatePromptVersion),
                                                          call.retry.max_attempts}));
        }
    };
    return run_jobs(records, "translate|" + call.model + "|" + std::string(kTranslatePromptVersion), job, opt);
}

inline std::vector<ResultEntry> read_result_log(const fs::path& path) {
    std::ifstream probe(path);
    if (!probe) throw ConfigError("cannot open result log '" + path.string() + "'");
    std::vector<ResultEntry> out;
    const auto lines = read_log_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            out.push_back(entry_from_json(nlohmann::json::parse(lines[i])));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("unreadable result log line: ") + e.what(), i + 1);
        } catch (const DataError& e) {
            throw DataError(e.what(), i + 1);
        }
    }
    return out;
}

inline std::vector<PredictionRecord> successes(const std::vector<ResultEntry>& entries) {
    std::vector<PredictionRecord> out;
    for (const auto& e : entries)
        if (const auto* p = std::get_if<PredictionRecord>(&e)) out.push_back(*p);
    return out;
}

inline std::vector<TranslationEntry> read_translation_log(const fs::path& path) {
    std::ifstream probe(path);
    if (!probe) throw ConfigError("cannot open translation log '" + path.string() + "'");
    std::vector<TranslationEntry> out;
    const auto lines = read_log_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            out.push_back(translation_from_json(nlohmann::json::parse(lines[i])));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("unreadable translation log line: ") + e.what(), i + 1);
        }
    }
    return out;
}

} // namespace xling::inference
