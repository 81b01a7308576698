// fibpart: command-line front end for the sequence, partition, permutation,
// mex-matrix, design and clustering checks.
//
// Exit codes: 0 success, 1 verification failure or runtime error, 2 usage error.

#include "fibpart/acceptance.hpp"
#include "fibpart/mex_io.hpp"

#include <CLI11.hpp>
#include <curl/curl.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fibpart;

namespace {

enum class Format { Table, Csv, Json };

struct Globals {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string out;
    Format format = Format::Table;
    std::uint64_t seed = 1;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes to --out when given, otherwise stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::trunc);
            if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

// "2,1;3,0" -> blocks (2,1), (3,0)
std::vector<GbsBlock> parse_blocks(const std::string& text) {
    std::vector<GbsBlock> blocks;
    for (const auto& item : split(text, ';')) {
        const auto parts = split(item, ',');
        if (parts.size() != 2) throw UsageError("--blocks: expected 'i,j;i,j;...', got '" + item + "'");
        blocks.push_back({std::stoi(parts[0]), parse_int(parts[1])});
    }
    if (blocks.empty()) throw UsageError("--blocks: no blocks given");
    return blocks;
}

std::string cache_dir() {
    if (const char* d = std::getenv("FIBPART_OEIS_CACHE"); d && *d) return d;
    return (acceptance::default_config().data_dir / "oeis").string();
}

size_t curl_write(char* ptr, size_t size, size_t nmemb, void* userdata) {
    static_cast<std::string*>(userdata)->append(ptr, size * nmemb);
    return size * nmemb;
}

std::string fetch_bfile(const std::string& id) {
    const std::string url = "https://oeis.org/" + id + "/b" + id.substr(1) + ".txt";
    CURL* curl = curl_easy_init();
    if (!curl) throw oeis::FetchError("curl initialisation failed");
    std::string body;
    curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, curl_write);
    curl_easy_setopt(curl, CURLOPT_WRITEDATA, &body);
    curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl, CURLOPT_TIMEOUT, 30L);
    const CURLcode rc = curl_easy_perform(curl);
    long status = 0;
    curl_easy_getinfo(curl, CURLINFO_RESPONSE_CODE, &status);
    curl_easy_cleanup(curl);
    if (rc != CURLE_OK) throw oeis::FetchError(url + ": " + curl_easy_strerror(rc));
    if (status != 200) throw oeis::FetchError(url + ": HTTP " + std::to_string(status));
    return body;
}

void print_report(const Globals& g, const IdentityReport& r, const std::string& title, json extra = json::object()) {
    Sink sink(g.out);
    auto& os = sink.os();
    if (g.format == Format::Json) {
        json j = to_json(r);
        j["title"] = title;
        for (auto& [k, v] : extra.items()) j[k] = v;
        os << j.dump(2) << '\n';
        return;
    }
    if (g.format == Format::Csv) {
        os << "identity,witness,detail\n";
        for (const auto& v : r.failures) os << '"' << v.identity << "\"," << to_string(v.witness) << ",\"" << v.detail << "\"\n";
        return;
    }
    os << title << ": " << (r.ok() ? "ok" : "FAILED") << ", checked up to " << to_string(r.checked_range) << ", "
       << r.violation_count << " violations\n";
    for (const auto& [name, value] : r.metrics) os << "  " << name << " = " << to_string(value) << '\n';
    for (const auto& v : r.failures) {
        os << "  counterexample: " << v.identity << " at " << to_string(v.witness);
        if (!v.detail.empty()) os << " (" << v.detail << ")";
        os << '\n';
    }
}

void print_values(const Globals& g, const std::string& name, Int first_index, const std::vector<Int>& values) {
    Sink sink(g.out);
    auto& os = sink.os();
    if (g.format == Format::Json) {
        json j{{"sequence", name}, {"offset", to_string(first_index)}, {"values", json::array()}};
        for (auto v : values) j["values"].push_back(to_string(v));
        os << j.dump(2) << '\n';
    } else if (g.format == Format::Csv) {
        os << "n,value\n";
        for (std::size_t k = 0; k < values.size(); ++k) os << to_string(first_index + static_cast<Int>(k)) << ',' << to_string(values[k]) << '\n';
    } else {
        for (std::size_t k = 0; k < values.size(); ++k) os << (k ? ", " : "") << to_string(values[k]);
        os << '\n';
    }
}

void print_matrix(const Globals& g, const MexMatrix& m) {
    Sink sink(g.out);
    auto& os = sink.os();
    if (g.format == Format::Json) {
        os << json{{"rows", m.rows()}, {"cols", m.cols()}, {"matrix", m.data()}}.dump() << '\n';
        return;
    }
    const char sep = g.format == Format::Csv ? ',' : ' ';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? std::string(1, sep) : "") << r[j];
        os << '\n';
    }
}

const PiecewisePermutation& perm_from(const std::string& name, const std::string& tuples, std::optional<PiecewisePermutation>& storage) {
    if (!tuples.empty()) {
        storage.emplace(parse_tuples(tuples));
        return *storage;
    }
    if (name.empty()) throw UsageError("--name or --tuples is required");
    return builtin_perm(name);
}

int exit_for(bool ok) { return ok ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Beatty sequences, Fibonacci-like partitions, the mex matrix and its designs"};
    app.require_subcommand(1);
    Globals g;
    const std::map<std::string, Format> formats{{"table", Format::Table}, {"csv", Format::Csv}, {"json", Format::Json}};
    app.add_option("--threads", g.threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "write the report to this file instead of stdout");
    app.add_option("--format", g.format, "output format: table, csv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    app.add_option("--seed", g.seed, "seed for randomized steps");
    // accept the global flags after the subcommand too
    app.fallthrough();

    int rc = 0;

    // seq
    auto* seq = app.add_subcommand("seq", "print a sequence: a, b, fib, gbs (with --i --j), row2, or a named permutation");
    std::string seq_kind = "a";
    int seq_i = 0;
    std::string seq_j = "0", seq_perm;
    Int seq_from = 1;
    long long seq_from_ll = 1;
    std::size_t seq_count = 20;
    seq->add_option("kind", seq_kind, "a | b | fib | gbs | row2 | perm")->check(CLI::IsMember({"a", "b", "fib", "gbs", "row2", "perm"}));
    seq->add_option("--i", seq_i, "block level i >= -1 for gbs");
    seq->add_option("--j", seq_j, "block shift j for gbs");
    seq->add_option("--name", seq_perm, "permutation name for perm");
    seq->add_option("--from", seq_from_ll, "first index");
    seq->add_option("--count", seq_count, "number of terms");
    seq->callback([&] {
        seq_from = seq_from_ll;
        std::vector<Int> v;
        std::string name = seq_kind;
        for (std::size_t k = 0; k < seq_count; ++k) {
            const Int n = seq_from + static_cast<Int>(k);
            if (seq_kind == "a") v.push_back(lower_wythoff(n));
            else if (seq_kind == "b") v.push_back(upper_wythoff(n));
            else if (seq_kind == "fib") v.push_back(fib(static_cast<int>(n)));
            else if (seq_kind == "row2") v.push_back(row2_closed_form(static_cast<std::int64_t>(n)));
            else if (seq_kind == "gbs") {
                const GbsBlock b{seq_i, parse_int(seq_j)};
                name = "f" + to_string(b).substr(1);
                v.push_back(gbs_eval(b, n));
            } else {
                if (seq_perm.empty()) throw UsageError("seq perm: --name is required");
                name = seq_perm;
                v.push_back(builtin_perm(seq_perm)(n));
            }
        }
        print_values(g, name, seq_from, v);
    });

    // partition
    auto* part = app.add_subcommand("partition", "list or verify a Fibonacci-like partition");
    part->require_subcommand(1);
    std::string part_kind = "first", part_blocks;
    int part_k = 3;
    long long part_upto = 100000;
    std::size_t part_cap = 10;
    const auto part_spec = [&] {
        if (!part_blocks.empty()) {
            PartitionSpec s;
            s.blocks = parse_blocks(part_blocks);
            return s;
        }
        return part_kind == "first" ? standard_partition_first(part_k) : standard_partition_second(part_k);
    };
    for (auto* sub : {part->add_subcommand("show", "print the blocks"), part->add_subcommand("verify", "check the partition on a prefix"),
                      part->add_subcommand("refine", "bifurcate the lowest-level blocks and print the result")}) {
        sub->add_option("--kind", part_kind, "first | second")->check(CLI::IsMember({"first", "second"}));
        sub->add_option("--k", part_k, "family index");
        sub->add_option("--blocks", part_blocks, "custom blocks 'i,j;i,j;...'");
        sub->add_option("--upto", part_upto, "check integers up to N");
        sub->add_option("--cap", part_cap, "counterexamples to keep");
    }
    part->get_subcommand("show")->callback([&] {
        const auto s = part_spec();
        Sink sink(g.out);
        if (g.format == Format::Json) sink.os() << to_json(s).dump(2) << '\n';
        else {
            if (g.format == Format::Csv) sink.os() << "i,j\n";
            for (const auto& b : s.blocks) sink.os() << (g.format == Format::Csv ? std::to_string(b.i) + "," + to_string(b.j) : "R" + to_string(b).substr(1)) << '\n';
        }
    });
    part->get_subcommand("refine")->callback([&] {
        const auto s = refine(part_spec());
        Sink sink(g.out);
        if (g.format == Format::Json) sink.os() << to_json(s).dump(2) << '\n';
        else for (const auto& b : s.blocks) sink.os() << "R" << to_string(b).substr(1) << '\n';
    });
    part->get_subcommand("verify")->callback([&] {
        const auto s = part_spec();
        const auto r = verify_partition(s, part_upto, part_cap, g.threads);
        print_report(g, r, std::to_string(s.blocks.size()) + "-block partition", json{{"partition", to_json(s)}});
        rc = exit_for(r.ok());
    });

    // perm
    auto* perm = app.add_subcommand("perm", "evaluate and check piecewise permutations");
    perm->require_subcommand(1);
    std::string perm_name, perm_tuples;
    long long perm_upto = 20;
    int perm_max_order = 12;
    std::optional<PiecewisePermutation> perm_storage;
    auto* perm_eval_cmd = perm->add_subcommand("eval", "print p(1), ..., p(upto)");
    auto* perm_order_cmd = perm->add_subcommand("order", "least k with p^k = id on 1..upto");
    auto* perm_check_cmd = perm->add_subcommand("check", "injectivity and coverage on 1..upto");
    auto* perm_list_cmd = perm->add_subcommand("list", "print the built-in catalog as tuple lists");
    for (auto* sub : {perm_eval_cmd, perm_order_cmd, perm_check_cmd}) {
        sub->add_option("--name", perm_name, "built-in permutation (see perm list)");
        sub->add_option("--tuples", perm_tuples, "pieces '(a,b,c,i,j);...'");
        sub->add_option("--upto", perm_upto, "prefix length");
    }
    perm_order_cmd->add_option("--max-order", perm_max_order, "largest order tried");
    perm_eval_cmd->callback([&] {
        const auto& p = perm_from(perm_name, perm_tuples, perm_storage);
        std::vector<Int> v;
        for (Int n = 1; n <= perm_upto; ++n) v.push_back(p(n));
        print_values(g, p.label(), 1, v);
    });
    perm_order_cmd->callback([&] {
        const auto& p = perm_from(perm_name, perm_tuples, perm_storage);
        const auto res = detect_order(p, perm_upto, perm_max_order);
        Sink sink(g.out);
        if (g.format == Format::Json) {
            sink.os() << json{{"permutation", p.label()}, {"order", res.order ? json(*res.order) : json(nullptr)}, {"max_order", res.max_order},
                              {"prefix", to_string(res.prefix)}}.dump(2) << '\n';
        } else {
            sink.os() << p.label() << ": " << res.label() << '\n';
        }
    });
    perm_check_cmd->callback([&] {
        const auto& p = perm_from(perm_name, perm_tuples, perm_storage);
        const auto r = verify_bijection_prefix(p, perm_upto);
        print_report(g, r, p.label() + " bijection prefix");
        rc = exit_for(r.ok());
    });
    perm_list_cmd->callback([&] {
        Sink sink(g.out);
        json j = json::object();
        for (const auto& [name, p] : builtin_perms()) {
            if (g.format == Format::Json) j[name] = format_tuples(p.pieces());
            else sink.os() << name << (g.format == Format::Csv ? "," : "  ") << format_tuples(p.pieces()) << '\n';
        }
        if (g.format == Format::Json) sink.os() << j.dump(2) << '\n';
    });

    // identity
    auto* ident = app.add_subcommand("identity", "check claims written in the identity language");
    ident->require_subcommand(1);
    std::string id_claim, id_corpus;
    long long id_upto = 100000;
    auto* ident_check = ident->add_subcommand("check", "check one claim or a corpus file for n = 1..upto");
    ident_check->add_option("--claim", id_claim, "a single claim, e.g. 'a(b(n)) = a(n) + b(n)'");
    ident_check->add_option("--corpus", id_corpus, "claim file, one per line, '#' comments");
    ident_check->add_option("--upto", id_upto, "largest n");
    auto* ident_parse = ident->add_subcommand("parse", "print the canonical form of a claim");
    ident_parse->add_option("claim", id_claim)->required();
    ident_check->callback([&] {
        if (id_claim.empty() == id_corpus.empty()) throw UsageError("identity check: give exactly one of --claim, --corpus");
        IdentityReport r;
        if (!id_claim.empty()) r = dsl::check(dsl::parse_claim(id_claim), id_upto);
        else r = dsl::check_corpus(dsl::load_corpus(id_corpus), id_upto, g.threads);
        print_report(g, r, id_claim.empty() ? id_corpus : dsl::print(dsl::parse_claim(id_claim)));
        rc = exit_for(r.ok());
    });
    ident_parse->callback([&] {
        Sink sink(g.out);
        sink.os() << dsl::print(dsl::parse_claim(id_claim)) << '\n';
    });

    // mex
    auto* mex = app.add_subcommand("mex", "the greedy mex matrix");
    mex->require_subcommand(1);
    std::size_t mex_rows = 4, mex_cols = 4, mex_row = 2;
    std::string mex_dir, mex_path;
    auto* mex_gen = mex->add_subcommand("gen", "print rows 0..rows-1, cols columns");
    auto* mex_export = mex->add_subcommand("export", "write (j, q) plot data for one row");
    auto* mex_save = mex->add_subcommand("save", "generate and store rows as checksummed binary files");
    auto* mex_load = mex->add_subcommand("load", "load stored rows, optionally extend them, and print or re-save");
    auto* mex_cov = mex->add_subcommand("coverage", "consecutive coverage and distinctness of rows and row differences");
    for (auto* sub : {mex_gen, mex_export, mex_save, mex_cov}) {
        sub->add_option("--rows", mex_rows, "number of rows (row 0 is all zeros)")->check(CLI::PositiveNumber);
        sub->add_option("--cols", mex_cols, "number of columns")->check(CLI::PositiveNumber);
    }
    mex_export->add_option("--row", mex_row, "row index");
    mex_export->add_option("--path", mex_path, "CSV destination")->required();
    mex_save->add_option("--dir", mex_dir, "row directory")->required();
    mex_load->add_option("--dir", mex_dir, "row directory")->required();
    std::size_t mex_extend = 0;
    mex_load->add_option("--extend-cols", mex_extend, "continue generation to this many columns and save back");
    mex_gen->callback([&] { print_matrix(g, generate(mex_rows - 1, mex_cols)); });
    mex_export->callback([&] {
        if (mex_row >= mex_rows) mex_rows = mex_row + 1;
        export_plot_data(generate(mex_rows - 1, mex_cols), mex_row, mex_path);
    });
    mex_save->callback([&] {
        save_rows(generate(mex_rows - 1, mex_cols), mex_dir);
        std::cerr << "saved " << mex_rows << " rows x " << mex_cols << " columns to " << mex_dir << '\n';
    });
    mex_load->callback([&] {
        auto m = load_rows(mex_dir);
        if (mex_extend > m.cols()) {
            m.generate_to(m.rows(), mex_extend);
            save_rows(m, mex_dir);
            std::cerr << "extended to " << m.cols() << " columns\n";
        }
        if (m.cols() <= 64 || !g.out.empty()) print_matrix(g, m);
        else std::cout << m.rows() << " rows x " << m.cols() << " columns\n";
    });
    mex_cov->callback([&] {
        const auto m = generate(mex_rows - 1, mex_cols);
        const auto rep = coverage_report(m);
        Sink sink(g.out);
        auto& os = sink.os();
        if (g.format == Format::Json) {
            json j{{"cols", rep.cols}, {"rows", json::array()}, {"pairs", json::array()}};
            for (std::size_t i = 0; i < m.rows(); ++i) j["rows"].push_back({{"row", i}, {"prefix", rep.row_prefix[i]}, {"distinct", static_cast<bool>(rep.row_distinct[i])}});
            for (const auto& p : rep.pairs) j["pairs"].push_back({{"lower", p.lower}, {"upper", p.upper}, {"radius", p.radius}, {"distinct", p.distinct}});
            os << j.dump(2) << '\n';
        } else {
            os << "kind,a,b,coverage,distinct\n";
            for (std::size_t i = 0; i < m.rows(); ++i) os << "row," << i << ",," << rep.row_prefix[i] << ',' << rep.row_distinct[i] << '\n';
            for (const auto& p : rep.pairs) os << "pair," << p.lower << ',' << p.upper << ',' << p.radius << ',' << p.distinct << '\n';
        }
    });

    // dm
    auto* dm = app.add_subcommand("dm", "difference matrices over Z_n");
    dm->require_subcommand(1);
    std::string dm_file;
    std::int64_t dm_p = 5;
    std::size_t dm_rows = 7, dm_cols = 10000;
    auto* dm_verify = dm->add_subcommand("verify", "check a '# dm n m lambda Z_n' CSV file");
    dm_verify->add_option("--file", dm_file, "difference matrix CSV")->required()->check(CLI::ExistingFile);
    auto* dm_field = dm->add_subcommand("field", "write the multiplication-table difference matrix of Z_p");
    dm_field->add_option("--p", dm_p, "prime order")->required();
    auto* dm_prefix = dm->add_subcommand("prefix", "distinct differences between rows of the mex matrix (integer prefix mode)");
    dm_prefix->add_option("--rows", dm_rows, "rows")->check(CLI::PositiveNumber);
    dm_prefix->add_option("--cols", dm_cols, "columns")->check(CLI::PositiveNumber);
    const auto dm_out = [&](const DifferenceMatrixReport& r) {
        Sink sink(g.out);
        if (g.format == Format::Json) sink.os() << to_json(r).dump(2) << '\n';
        else {
            sink.os() << r.group << ": " << r.verdict() << " (" << r.rows_checked << " rows, " << r.cols_checked << " columns)\n";
            for (const auto& p : r.pairs) {
                sink.os() << "  rows " << p.r << "," << p.s << ": " << (p.wrong_counts.empty() ? "ok" : std::to_string(p.wrong_counts.size()) + " wrong counts");
                if (r.prefix_mode) sink.os() << ", distinct " << p.distinct << ", radius " << p.radius;
                sink.os() << '\n';
            }
        }
        rc = exit_for(r.ok());
    };
    dm_verify->callback([&] {
        std::ifstream in(dm_file);
        const auto f = read_dm_csv(in);
        dm_out(verify_difference_matrix(f.entries, f.n, f.lambda));
    });
    dm_field->callback([&] {
        if (!is_prime(dm_p)) throw UsageError("--p: " + std::to_string(dm_p) + " is not prime");
        Sink sink(g.out);
        write_dm_csv(field_dm(dm_p), dm_p, 1, sink.os());
    });
    dm_prefix->callback([&] { dm_out(prefix_dm_check(generate(dm_rows - 1, dm_cols), dm_cols)); });

    // oa
    auto* oa = app.add_subcommand("oa", "orthogonal arrays");
    oa->require_subcommand(1);
    std::string oa_file;
    std::int64_t oa_p = 0;
    auto* oa_verify = oa->add_subcommand("verify", "check a '# oa N k s t lambda' CSV file");
    oa_verify->add_option("--file", oa_file, "orthogonal array CSV")->required()->check(CLI::ExistingFile);
    auto* oa_example = oa->add_subcommand("example", "write the 9 x 4 strength-2 array on three symbols");
    auto* oa_from_dm = oa->add_subcommand("from-dm", "build the array of a difference matrix and verify it");
    oa_from_dm->add_option("--file", oa_file, "difference matrix CSV")->check(CLI::ExistingFile);
    oa_from_dm->add_option("--field", oa_p, "use the Z_p multiplication-table matrix");
    const auto oa_out = [&](const OrthogonalArray& a, const OaReport& r) {
        Sink sink(g.out);
        if (g.format == Format::Json) {
            json j = to_json(r);
            j["array"] = {{"runs", a.runs}, {"factors", a.factors}, {"levels", a.levels}, {"strength", a.strength}, {"index", a.index}};
            sink.os() << j.dump(2) << '\n';
        } else if (g.format == Format::Csv) {
            write_oa_csv(a, sink.os());
        } else {
            sink.os() << "OA(" << a.runs << ", " << a.factors << ", " << a.levels << ", " << a.strength << ") index " << a.index << ": "
                      << (r.ok() ? "verified" : "FAILED") << ", " << r.subsets_checked << " column subsets, " << r.violation_count
                      << " violations\n";
        }
        rc = exit_for(r.ok());
    };
    oa_verify->callback([&] {
        std::ifstream in(oa_file);
        const auto a = read_oa_csv(in);
        oa_out(a, verify_oa(a, g.threads));
    });
    oa_example->callback([&] {
        const auto a = example_oa_4_3();
        oa_out(a, verify_oa(a, g.threads));
    });
    oa_from_dm->callback([&] {
        if ((oa_p != 0) == !oa_file.empty()) throw UsageError("oa from-dm: give exactly one of --file, --field");
        OrthogonalArray a;
        if (oa_p != 0) {
            if (!is_prime(oa_p)) throw UsageError("--field: " + std::to_string(oa_p) + " is not prime");
            a = dm_to_oa(field_dm(oa_p), oa_p);
        } else {
            std::ifstream in(oa_file);
            const auto f = read_dm_csv(in);
            a = dm_to_oa(f.entries, f.n);
        }
        oa_out(a, verify_oa(a, g.threads));
    });

    // cluster
    auto* cl = app.add_subcommand("cluster", "cluster the slopes q/j of one mex row over its last window columns");
    std::size_t cl_row = 2, cl_cols = 100000, cl_window = 10000, cl_kmax = 15, cl_k = 0;
    bool cl_points = false;
    cl->add_option("--row", cl_row, "row index (>= 1)");
    cl->add_option("--cols", cl_cols, "columns to generate");
    cl->add_option("--window", cl_window, "trailing columns sampled");
    cl->add_option("--k-max", cl_kmax, "largest cluster count tried");
    cl->add_option("--k", cl_k, "fix the cluster count instead of maximizing the silhouette");
    cl->add_flag("--points", cl_points, "emit per-point (j, slope, cluster) CSV");
    cl->callback([&] {
        const auto m = generate(cl_row, cl_cols);
        const auto sample = extract_slopes(m, cl_row, cl_window);
        auto rep = analyze_sample(sample, m.cols(), cl_kmax, g.seed, g.threads);
        if (cl_k != 0) {
            const auto km = kmeans(sample.values, cl_k, g.seed);
            rep.k_star = cl_k;
            rep.centers = km.centers;
            rep.counts = km.counts;
        }
        Sink sink(g.out);
        if (cl_points) {
            write_cluster_csv(sample, rep.centers, sink.os());
        } else if (g.format == Format::Json) {
            sink.os() << to_json(rep).dump(2) << '\n';
        } else {
            sink.os() << "row " << rep.row << ", " << rep.cols << " columns, window " << rep.window << ", k* = " << rep.k_star << '\n';
            sink.os().precision(7);
            for (std::size_t k = 0; k < rep.centers.size(); ++k) {
                sink.os() << "  " << std::fixed << rep.centers[k] << "  (" << rep.counts[k] << " points)\n";
            }
        }
    });

    // oeis
    auto* oe = app.add_subcommand("oeis", "cross-check generated sequences against b-files (cache: $FIBPART_OEIS_CACHE)");
    oe->require_subcommand(1);
    std::string oe_manifest, oe_id;
    bool oe_fetch = false;
    auto* oe_check = oe->add_subcommand("check", "run the manifest cases");
    oe_check->add_option("--manifest", oe_manifest, "manifest JSON (default: <cache>/manifest.json)");
    oe_check->add_option("--id", oe_id, "run only this id");
    oe_check->add_flag("--fetch", oe_fetch, "download b-files missing from the cache");
    auto* oe_show = oe->add_subcommand("show", "print the cached b-file terms");
    oe_show->add_option("--id", oe_id, "sequence id")->required();
    oe_show->add_flag("--fetch", oe_fetch, "download the b-file if missing");
    const auto make_cache = [&] {
        return oeis::BfileCache(cache_dir(), oe_fetch ? oeis::FetchPolicy::FetchIfMissing : oeis::FetchPolicy::OfflineOnly, fetch_bfile);
    };
    oe_check->callback([&] {
        auto cache = make_cache();
        const auto cases = oeis::load_manifest(oe_manifest.empty() ? fs::path(cache_dir()) / "manifest.json" : fs::path(oe_manifest));
        json all = json::array();
        bool ok = true;
        std::size_t ran = 0;
        Sink sink(g.out);
        if (g.format == Format::Csv) sink.os() << "id,status,compared,available,mismatch_index,expected,got\n";
        for (const auto& c : cases) {
            if (!oe_id.empty() && oeis::normalize_id(oe_id) != c.id) continue;
            ++ran;
            const auto r = oeis::crosscheck(c, cache);
            ok = ok && r.ok();
            if (g.format == Format::Json) all.push_back(oeis::to_json(r));
            else if (g.format == Format::Csv) {
                sink.os() << r.id << ',' << oeis::status_name(r.status) << ',' << r.compared << ',' << r.available << ',' << r.mismatch_index
                          << ',' << to_string(r.expected) << ',' << to_string(r.got) << '\n';
            } else {
                sink.os() << r.id << "  " << oeis::status_name(r.status) << "  " << oeis::describe(c.generator) << ", " << c.transform.describe();
                if (r.status == oeis::Status::Mismatch) sink.os() << "  (term " << r.mismatch_index << ": expected " << to_string(r.expected) << ", got " << to_string(r.got) << ")";
                if (r.status == oeis::Status::Shortfall) sink.os() << "  (" << r.available << " terms available)";
                sink.os() << '\n';
            }
        }
        if (ran == 0) throw UsageError("--id: " + oe_id + " is not in the manifest");
        if (g.format == Format::Json) sink.os() << all.dump(2) << '\n';
        rc = exit_for(ok);
    });
    oe_show->callback([&] {
        auto cache = make_cache();
        const auto b = cache.get(oe_id);
        std::vector<Int> values;
        for (const auto& [n, v] : b.terms) values.push_back(v);
        print_values(g, b.id, b.terms.empty() ? 0 : b.terms.front().first, values);
    });

    // repro
    auto* repro = app.add_subcommand("repro", "run one reproduction check by name, or 'all'");
    std::string repro_name;
    std::size_t repro_cols = 100000;
    std::vector<std::string> names{"all"};
    for (const auto& e : acceptance::all_checks()) names.push_back(e.repro_name);
    repro->add_option("name", repro_name, "check name")->required()->check(CLI::IsMember(names));
    repro->add_option("--cols", repro_cols, "columns for coverage and table1 (1000000 reproduces the published thresholds)");
    repro->callback([&] {
        auto cfg = acceptance::default_config();
        cfg.threads = g.threads;
        cfg.seed = g.seed;
        cfg.coverage_cols = repro_cols;
        acceptance::Context ctx(cfg);
        json all = json::array();
        bool ok = true;
        Sink sink(g.out);
        for (const auto& e : acceptance::all_checks()) {
            if (repro_name != "all" && repro_name != e.repro_name) continue;
            const auto r = e.run(ctx);
            ok = ok && r.passed;
            if (g.format == Format::Json) {
                all.push_back({{"check", e.repro_name}, {"passed", r.passed}, {"summary", r.summary}, {"details", r.details}});
                continue;
            }
            sink.os() << r.line() << '\n';
            if (std::string(e.repro_name) == "table1") {
                // one line per row: fitted centers at k*, then the published ones
                sink.os().precision(7);
                for (const auto& row : r.details["cluster_counts"]) {
                    const auto& rep = row["report"];
                    sink.os() << "  row " << row["row"].get<std::size_t>() << "  k*=" << row["k_star"].get<std::size_t>() << "  ";
                    for (const auto& c : rep["centers"]) sink.os() << std::fixed << c.get<double>() << ' ';
                    sink.os() << "\n         published:  ";
                    for (double c : acceptance::published_slopes().at(row["row"].get<std::size_t>())) sink.os() << std::fixed << c << ' ';
                    sink.os() << '\n';
                }
            }
        }
        if (g.format == Format::Json) sink.os() << all.dump(2) << '\n';
        rc = exit_for(ok);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const dsl::ParseError& e) {
        std::cerr << "claim syntax error at " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
