// Command-line driver: builds the Abelian connection, star products,
// trivialization data and the deformed calculus over a chart file, and runs
// the verification suite.

#include "fedosov/fedosov.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace fedosov;

struct CommonArgs {
    std::string chart_path;
    int degree = -1;  // n_work override
    int h_order = -1; // K override
    std::string out_path;
    std::string format = "text";
};

void add_common(CLI::App *cmd, CommonArgs &args) {
    cmd->add_option("--chart", args.chart_path, "chart file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--degree", args.degree, "working grading truncation override");
    cmd->add_option("--h-order", args.h_order, "h-order override");
    cmd->add_option("--out", args.out_path, "write output to a file");
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
}

ChartPtr load_chart(const CommonArgs &args) {
    std::ifstream in(args.chart_path);
    std::stringstream buf;
    buf << in.rdbuf();
    io::ChartSpec spec = io::parse_chart(buf.str());
    return spec.to_chart(args.degree, args.h_order);
}

void write_output(const CommonArgs &args, const std::string &text) {
    if (args.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(args.out_path);
    out << text;
}

nlohmann::json parameters_json(const Chart &chart) {
    return {{"dim", chart.n()},
            {"n_work", chart.n_work()},
            {"h_order", chart.k_order()}};
}

std::string weyl_output(const CommonArgs &args, const std::string &query,
                        const Chart &chart, const WeylForm &value) {
    if (args.format == "json") {
        nlohmann::json doc = {{"query", query},
                              {"parameters", parameters_json(chart)},
                              {"result_terms", io::result_terms_json(value)},
                              {"checks", nlohmann::json::array()}};
        return doc.dump(2) + "\n";
    }
    return io::render(value) + "\n";
}

std::string star_output(const CommonArgs &args, const std::string &query,
                        const Chart &chart, const StarFunction &value) {
    if (args.format == "json") {
        nlohmann::json doc = {
            {"query", query},
            {"parameters", parameters_json(chart)},
            {"result_terms", io::result_terms_json(value, (size_t)chart.n())},
            {"checks", nlohmann::json::array()}};
        return doc.dump(2) + "\n";
    }
    return io::render(value) + "\n";
}

int cmd_r_form(const CommonArgs &args) {
    ChartPtr chart = load_chart(args);
    AbelianConnection conn = AbelianConnection::build(chart);
    write_output(args, weyl_output(args, "r-form", *chart, conn.r()));
    return 0;
}

int cmd_star(const CommonArgs &args, const std::string &lhs, const std::string &rhs) {
    ChartPtr chart = load_chart(args);
    AbelianConnection conn = AbelianConnection::build(chart);
    StarFunction f = io::parse_star_function(lhs);
    StarFunction g = io::parse_star_function(rhs);
    StarFunction prod =
        star_product(conn, f, g).truncated(chart->k_order());
    write_output(args, star_output(args, "star", *chart, prod));
    return 0;
}

int cmd_hamiltonian(const CommonArgs &args) {
    ChartPtr chart = load_chart(args);
    AbelianConnection conn = AbelianConnection::build(chart);
    TrivializationMap triv = TrivializationMap::build(Homotopy::build(conn));
    WeylForm H = triv.hamiltonian().truncated(chart->n_work());
    write_output(args, weyl_output(args, "hamiltonian", *chart, H));
    return 0;
}

int cmd_trivialize(const CommonArgs &args, const std::string &fn_text,
                   const std::string &direction) {
    ChartPtr chart = load_chart(args);
    AbelianConnection conn = AbelianConnection::build(chart);
    TrivializationMap triv = TrivializationMap::build(Homotopy::build(conn));
    StarFunction f = io::parse_star_function(fn_text);
    WeylForm result(chart);
    if (direction == "inverse") {
        WeylForm lift = quantize(triv.trivial_connection(), f);
        result = triv.apply_T_inv(lift);
    } else {
        WeylForm lift = quantize(conn, f);
        result = triv.apply_T(lift);
    }
    write_output(args,
                 weyl_output(args, "trivialize-" + direction, *chart, result));
    return 0;
}

int cmd_frame(const CommonArgs &args) {
    ChartPtr chart = load_chart(args);
    AbelianConnection conn = AbelianConnection::build(chart);
    TrivializationMap triv = TrivializationMap::build(Homotopy::build(conn));
    Frame frame = Frame::build(conn, triv); // raises if the frame lemma fails
    std::ostringstream text;
    nlohmann::json terms = nlohmann::json::array();
    for (int i = 1; i <= chart->n(); ++i) {
        text << "lambda_" << i << " = " << io::render(frame.lambda(i)) << "\n";
        if (args.format == "json")
            for (auto &entry :
                 io::result_terms_json(frame.lambda(i), (size_t)chart->n())) {
                entry["component"] = i;
                terms.push_back(entry);
            }
    }
    nlohmann::json checks = nlohmann::json::array();
    checks.push_back({{"name", "frame_commutation_lemma"},
                      {"passed", true},
                      {"residual", "0"}});
    text << "frame commutation lemma: ok\n";
    if (args.format == "json") {
        nlohmann::json doc = {{"query", "frame"},
                              {"parameters", parameters_json(*chart)},
                              {"result_terms", terms},
                              {"checks", checks}};
        write_output(args, doc.dump(2) + "\n");
    } else {
        write_output(args, text.str());
    }
    return 0;
}

int cmd_exterior(const CommonArgs &args, int k,
                 const std::vector<std::string> &components, int wedge_k,
                 const std::vector<std::string> &wedge_components) {
    ChartPtr chart = load_chart(args);
    AbelianConnection conn = AbelianConnection::build(chart);
    TrivializationMap triv = TrivializationMap::build(Homotopy::build(conn));
    Frame frame = Frame::build(conn, triv);
    const int n = chart->n();

    auto tuples = [&](int rank) {
        std::vector<std::vector<int>> out;
        std::vector<int> idx;
        detail::for_each_tuple(n, rank, idx, [&](const std::vector<int> &I) {
            for (size_t a = 1; a < I.size(); ++a)
                if (I[a] <= I[a - 1])
                    return;
            out.push_back(I);
        });
        return out;
    };
    auto tuple_name = [](const std::vector<int> &I) {
        std::string s;
        for (int i : I)
            s += (s.empty() ? "" : ",") + std::to_string(i);
        return s;
    };
    auto read_form = [&](int rank, const std::vector<std::string> &comps) {
        auto idx = tuples(rank);
        if (comps.size() != idx.size())
            throw validation_error("a " + std::to_string(rank) + "-form on " +
                                   std::to_string(n) + " variables needs " +
                                   std::to_string(idx.size()) + " components");
        StarForm eta(rank, n);
        for (size_t q = 0; q < idx.size(); ++q)
            eta.set(idx[q], io::parse_star_function(comps[q]));
        return eta;
    };
    auto print_form = [&](std::ostream &os, const std::string &label,
                          const StarForm &eta) {
        for (auto &I : tuples(eta.rank()))
            os << label << "(" << tuple_name(I)
               << ") = " << io::render(eta.eval(I)) << "\n";
    };

    std::ostringstream text;
    nlohmann::json json_results = nlohmann::json::array();
    auto emit_form = [&](const std::string &label, const StarForm &eta) {
        print_form(text, label, eta);
        if (args.format == "json")
            for (auto &I : tuples(eta.rank()))
                json_results.push_back(
                    {{"label", label},
                     {"indices", I},
                     {"result_terms",
                      io::result_terms_json(eta.eval(I), (size_t)n)}});
    };
    auto emit_function = [&](const std::string &label, const StarFunction &f) {
        text << label << " = " << io::render(f) << "\n";
        if (args.format == "json")
            json_results.push_back(
                {{"label", label},
                 {"indices", std::vector<int>{}},
                 {"result_terms", io::result_terms_json(f, (size_t)n)}});
    };
    if (k == 0) {
        StarFunction f = io::parse_star_function(components.at(0));
        emit_form("d_*f", d_star(frame, f));
        if (wedge_k == 0 && !wedge_components.empty()) {
            StarFunction g = io::parse_star_function(wedge_components.at(0));
            emit_function("f * g", frame.star(f, g));
        } else if (wedge_k > 0) {
            StarForm xi = read_form(wedge_k, wedge_components);
            emit_form("f ^_* xi", wedge_star(frame, f, xi));
        }
    } else {
        StarForm eta = read_form(k, components);
        emit_form("d_*eta", d_star(frame, eta));
        if (wedge_k == 0 && !wedge_components.empty()) {
            StarFunction g = io::parse_star_function(wedge_components.at(0));
            emit_form("eta ^_* g", wedge_star(frame, eta, g));
        } else if (wedge_k > 0) {
            StarForm xi = read_form(wedge_k, wedge_components);
            emit_form("eta ^_* xi", wedge_star(frame, eta, xi));
        }
    }
    if (args.format == "json") {
        nlohmann::json doc = {{"query", "exterior"},
                              {"parameters", parameters_json(*chart)},
                              {"result_terms", nlohmann::json::array()},
                              {"components", json_results},
                              {"checks", nlohmann::json::array()}};
        write_output(args, doc.dump(2) + "\n");
    } else {
        write_output(args, text.str());
    }
    return 0;
}

int cmd_verify(const CommonArgs &args, const std::string &mode) {
    ChartPtr chart = load_chart(args);
    verify::Options opt;
    opt.full = mode != "fast";
    std::vector<verify::CheckResult> results = verify::run_verification(chart, opt);
    std::ostringstream text;
    nlohmann::json checks = nlohmann::json::array();
    bool all_ok = true;
    for (auto &r : results) {
        all_ok = all_ok && r.passed;
        text << (r.passed ? "pass  " : "FAIL  ") << r.name;
        if (!r.passed)
            text << "  [" << r.detail << "]";
        text << "\n";
        checks.push_back({{"name", r.name},
                          {"passed", r.passed},
                          {"residual", r.passed ? "0" : r.detail}});
    }
    text << (all_ok ? "all checks passed\n" : "verification FAILED\n");
    if (args.format == "json") {
        nlohmann::json doc = {{"query", "verify"},
                              {"parameters", parameters_json(*chart)},
                              {"result_terms", nlohmann::json::array()},
                              {"checks", checks}};
        write_output(args, doc.dump(2) + "\n");
    } else {
        write_output(args, text.str());
    }
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Fedosov star products and deformed differential calculus on a "
                 "Darboux chart"};
    app.require_subcommand(1);

    CommonArgs args;

    auto *r_form = app.add_subcommand("r-form", "print the Abelian connection r");
    add_common(r_form, args);

    auto *star = app.add_subcommand("star", "star product of two functions");
    add_common(star, args);
    std::string star_lhs, star_rhs;
    star->add_option("lhs", star_lhs, "left factor")->required();
    star->add_option("rhs", star_rhs, "right factor")->required();

    auto *ham = app.add_subcommand("hamiltonian", "print the trivialization "
                                                  "Hamiltonian H(t)");
    add_common(ham, args);

    auto *trivialize =
        app.add_subcommand("trivialize", "apply T or T^-1 to a function's lift");
    add_common(trivialize, args);
    std::string triv_fn, triv_dir = "inverse";
    trivialize->add_option("function", triv_fn, "central function")->required();
    trivialize->add_option("--direction", triv_dir, "forward (T) or inverse (T^-1)")
        ->check(CLI::IsMember({"forward", "inverse"}));

    auto *frame = app.add_subcommand("frame", "print the frame functions lambda_i "
                                              "and check their commutation lemma");
    add_common(frame, args);

    auto *exterior = app.add_subcommand(
        "exterior", "exterior derivative and wedge products of frame forms");
    add_common(exterior, args);
    int ext_k = 0, ext_wedge_k = 0;
    std::vector<std::string> ext_components, ext_wedge;
    exterior->add_option("--k", ext_k, "form degree of the input")->required();
    exterior->add_option("components", ext_components,
                         "components on increasing index tuples")
        ->required();
    exterior->add_option("--wedge-k", ext_wedge_k, "form degree of the wedge factor");
    exterior->add_option("--wedge", ext_wedge,
                         "components of a second form to wedge with");

    auto *verify_cmd =
        app.add_subcommand("verify", "run the full invariant suite for a chart");
    add_common(verify_cmd, args);
    std::string check_mode = "full";
    verify_cmd->add_option("--check-mode", check_mode, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (r_form->parsed())
            return cmd_r_form(args);
        if (star->parsed())
            return cmd_star(args, star_lhs, star_rhs);
        if (ham->parsed())
            return cmd_hamiltonian(args);
        if (trivialize->parsed())
            return cmd_trivialize(args, triv_fn, triv_dir);
        if (frame->parsed())
            return cmd_frame(args);
        if (exterior->parsed())
            return cmd_exterior(args, ext_k, ext_components, ext_wedge_k, ext_wedge);
        if (verify_cmd->parsed())
            return cmd_verify(args, check_mode);
    } catch (const fedosov::parse_error &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const fedosov::error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
