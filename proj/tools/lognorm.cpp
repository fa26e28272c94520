// lognorm: rank and character reports for the naive cyclotomic norm group.
//
// Exit codes: 0 success, 1 internal error, 2 parse or invalid input,
// 3 unsupported input, 4 oracle ambiguity after retry, 5 formula/oracle
// disagreement.

#include "lognorm/report.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <condition_variable>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace {

using namespace lognorm;

enum Exit { kOk = 0, kInternal = 1, kInvalid = 2, kUnsupported = 3, kAmbiguous = 4, kDisagreement = 5 };

std::vector<long> parse_ells(const std::string& text)
{
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        long v = 0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || p != item.data() + item.size() || item.empty())
            throw ParseError("bad prime '" + item + "' in --ells");
        out.push_back(v);
    }
    if (out.empty())
        throw ParseError("--ells is empty");
    return out;
}

int cmd_rank(const std::string& spec_text, long ell, bool oracle, long precision)
{
    auto spec = numfield::parse_field_spec(spec_text);
    auto r = report::rank_report(spec, ell, {oracle, precision});
    std::cout << nlohmann::json(r).dump() << "\n";
    if (r.oracle_unresolved()) {
        std::cerr << "lognorm: oracle still ambiguous at precision " << r.tilde_e_oracle->precision << "\n";
        return kAmbiguous;
    }
    if (r.oracle_disagrees()) {
        std::cerr << "lognorm: formula " << r.tilde_e_formula << " disagrees with oracle " << *r.tilde_e_oracle->rank
                  << "\n";
        return kDisagreement;
    }
    return kOk;
}

int cmd_character(const std::string& spec_text, std::optional<long> ell)
{
    auto spec = numfield::parse_field_spec(spec_text);
    nlohmann::json j;
    if (auto a = std::get_if<numfield::AbstractSpec>(&spec)) {
        if (a->data.d_inf.order() > 2)
            throw ParseError("abstract data: D_inf must have order 1 or 2");
        j = report::character_report(a->data.group, a->data.d_inf, a->data.d_ell);
    } else {
        if (!ell)
            throw ParseError("--ell is required for " + spec_text);
        auto dec = numfield::decomposition_data(spec, *ell);
        j = report::character_report(dec.group, dec.d_inf, dec.d_ell);
        j["ell"] = *ell;
    }
    j["spec"] = numfield::to_string(spec);
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_corpus(long dmax, const std::string& ells_text, bool oracle, long jobs, long cyc_max, long precision)
{
    auto entries = report::corpus_entries(dmax, parse_ells(ells_text), cyc_max);
    if (jobs < 1)
        throw ParseError("--jobs must be positive");
    struct Slot {
        bool done = false;
        std::optional<report::RankReport> report;
        std::string error;
    };
    std::vector<Slot> slots(entries.size());
    std::mutex mutex;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= entries.size())
                return;
            Slot s;
            try {
                s.report = report::rank_report(entries[i].spec, entries[i].ell, {oracle, precision});
            } catch (const std::exception& e) {
                s.error = e.what();
            }
            s.done = true;
            {
                std::lock_guard lock(mutex);
                slots[i] = std::move(s);
            }
            ready.notify_all();
        }
    };
    std::vector<std::thread> pool;
    for (long t = 0; t < std::min<long>(jobs, static_cast<long>(entries.size())); ++t)
        pool.emplace_back(worker);

    report::CorpusSummary summary;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Slot s;
        {
            std::unique_lock lock(mutex);
            ready.wait(lock, [&] { return slots[i].done; });
            s = std::move(slots[i]);
        }
        if (s.report) {
            summary.add(*s.report);
            std::cout << nlohmann::json(*s.report).dump() << "\n";
        } else {
            ++summary.errors;
            std::cerr << "lognorm: " << numfield::to_string(entries[i].spec) << " at ell = " << entries[i].ell
                      << ": " << s.error << "\n";
        }
    }
    for (auto& t : pool)
        t.join();
    std::cerr << summary.table();
    if (summary.errors > 0)
        return kInternal;
    if (summary.disagreements > 0)
        return kDisagreement;
    if (summary.unresolved > 0)
        return kAmbiguous;
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rank and Galois character of the naive cyclotomic norm group"};
    app.require_subcommand(1);

    std::string spec;
    long ell = 0;
    bool oracle = false;
    std::optional<long> precision_flag;

    auto* rank = app.add_subcommand("rank", "Full report for one field at one prime");
    rank->add_option("spec", spec, "q:<d> | bq:<d1>,<d2> | cyc:<n> | abs:<path>")->required();
    rank->add_option("--ell", ell, "The prime ell")->required();
    rank->add_flag("--oracle", oracle, "Cross-check the rank with the kernel oracle");
    rank->add_option("--precision", precision_flag, "Oracle precision N (default 12 or LOGNORM_PRECISION)");

    long dmax = 10;
    std::string ells = "2,3,5,7,11,13";
    long jobs = 1;
    long cyc_max = 0;
    auto* corpus = app.add_subcommand("corpus", "Reports for Q and all quadratic fields up to a bound");
    corpus->add_option("--dmax", dmax, "Largest |d|, at most 200")->capture_default_str();
    corpus->add_option("--ells", ells, "Comma-separated primes")->capture_default_str();
    corpus->add_flag("--oracle", oracle, "Cross-check every rank with the kernel oracle");
    corpus->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    corpus->add_option("--cyc-max", cyc_max, "Also run cyc:3 .. cyc:<n>")->capture_default_str();
    corpus->add_option("--precision", precision_flag, "Oracle precision N");

    std::optional<long> char_ell;
    auto* character = app.add_subcommand("character", "Characters attached to (G, D_inf, D_ell)");
    character->add_option("spec", spec, "q:<d> | bq:<d1>,<d2> | cyc:<n> | abs:<path>")->required();
    character->add_option("--ell", char_ell, "The prime ell (not needed for abs:)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        long precision = precision_flag ? *precision_flag : report::default_precision();
        if (precision < 4)
            throw ParseError("--precision must be at least 4");
        if (*rank)
            return cmd_rank(spec, ell, oracle, precision);
        if (*corpus)
            return cmd_corpus(dmax, ells, oracle, jobs, cyc_max, precision);
        return cmd_character(spec, char_ell);
    } catch (const ParseError& e) {
        std::cerr << "lognorm: " << e.what() << "\n";
        return kInvalid;
    } catch (const UnsupportedInput& e) {
        std::cerr << "lognorm: unsupported: " << e.what() << "\n";
        return kUnsupported;
    } catch (const OracleAmbiguity& e) {
        std::cerr << "lognorm: " << e.what() << "\n";
        return kAmbiguous;
    } catch (const std::invalid_argument& e) {
        std::cerr << "lognorm: invalid input: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "lognorm: internal error: " << e.what() << "\n";
        return kInternal;
    }
}
