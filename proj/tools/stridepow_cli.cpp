/*
   Copyright 2026 The stridepow authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// stridepow: constructs polynomials with prescribed stride-n coefficients
// of their n-th power, and inspects the structure of the underlying
// coefficient-power map.
//
// Exit codes: 0 success, 1 bad arguments or parse error, 2 numeric
// failure, 3 unsupported exact instance (characteristic hypothesis or
// n' >= 3 over a finite field).

#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stridepow/field.hpp"
#include "stridepow/phi.hpp"
#include "stridepow/poly.hpp"
#include "stridepow/solver.hpp"

using json = nlohmann::ordered_json;
using namespace stridepow;

namespace {

struct CliOptions {
    std::string field_text = "C";
    std::string targets_text;
    std::string alpha_text;
    unsigned n = 1;
    unsigned m = 0;
    bool m_given = false;
    std::uint64_t seed = 0;
    unsigned trials = 64;
    double epsilon = 1e-9;
    double tolerance = 1e-10;
    int steps = 64;
    int newton_iters = 8;
    int max_restarts = 50;
    std::string output = "human";
    bool trace = false;
};

FieldPtr make_field(const CliOptions& opt) {
    if (opt.field_text == "C") return Field::complex_approx(opt.epsilon);
    return Field::parse(opt.field_text);
}

HomotopyConfig make_config(const CliOptions& opt) {
    HomotopyConfig cfg;
    cfg.steps = opt.steps;
    cfg.newton_iters = opt.newton_iters;
    cfg.tolerance = opt.tolerance;
    cfg.max_restarts = opt.max_restarts;
    cfg.seed = opt.seed;
    return cfg;
}

// comma-separated element list; commas inside [...] belong to one element;
// "@path" reads the list from a file
std::vector<FieldElement> parse_element_list(const FieldPtr& field, const std::string& raw) {
    std::string text = raw;
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw std::invalid_argument("cannot read targets file '" + text.substr(1) + "'");
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    std::vector<std::string> tokens;
    std::string cur;
    int depth = 0;
    for (char ch : text) {
        if (ch == '[') ++depth;
        if (ch == ']') --depth;
        if ((ch == ',' && depth == 0) || ch == '\n') {
            if (!cur.empty()) tokens.push_back(cur);
            cur.clear();
            continue;
        }
        if (!std::isspace(static_cast<unsigned char>(ch))) cur += ch;
    }
    if (!cur.empty()) tokens.push_back(cur);
    if (tokens.empty()) throw std::invalid_argument("empty element list '" + raw + "'");
    std::vector<FieldElement> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) out.push_back(field->parse_element(tok));
    return out;
}

json elements_json(const std::vector<FieldElement>& v) {
    json arr = json::array();
    for (const auto& x : v) arr.push_back(x.to_text());
    return arr;
}

json report_json(const JacobianReport& rep, const FieldPtr& field) {
    json j;
    j["matrix"] = json::array();
    for (const auto& row : rep.matrix) j["matrix"].push_back(elements_json(row));
    j["invertible"] = rep.invertible;
    if (rep.permutation) {
        json perm = json::array();
        for (unsigned r : *rep.permutation) perm.push_back(r + 1);  // 1-based rows
        j["permutation"] = perm;
        j["diagonal"] = elements_json(*rep.diagonal_values);
    }
    if (field->kind() == FieldKind::ComplexApprox) {
        j["minPivotRatio"] = rep.min_pivot_ratio;
        j["singularThreshold"] = rep.singular_threshold;
    }
    return j;
}

void emit(const json& j, const CliOptions& opt, const std::vector<std::string>& human_lines) {
    if (opt.output == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& line : human_lines) std::cout << line << "\n";
    }
}

std::string join_elements(const std::vector<FieldElement>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += v[i].to_text();
    }
    return s;
}

double max_target_mag(const std::vector<FieldElement>& v) {
    double r = 0.0;
    for (const auto& x : v) r = std::max(r, magnitude(x));
    return r;
}

json base_json(const char* command, const CliOptions& opt) {
    json j;
    j["schema"] = 1;
    j["command"] = command;
    j["field"] = opt.field_text;
    j["seed"] = opt.seed;
    return j;
}

int cmd_solve(const CliOptions& opt) {
    FieldPtr field = make_field(opt);
    TargetVector target(opt.n, parse_element_list(field, opt.targets_text));
    SolveOutcome out = solve(target, make_config(opt));
    const double check = verify(out.alpha, target);  // fresh verification before printing

    bool ok;
    if (field->finite()) {
        ok = check == 0.0;
    } else {
        const double scale = 1.0 + max_target_mag(target.values);
        const double tol =
            out.method == SolveMethod::N2Constructive ? 1e-7 * scale : opt.tolerance * scale;
        ok = check <= tol;
    }

    json j = base_json("solve", opt);
    j["n"] = opt.n;
    j["targets"] = elements_json(target.values);
    j["method"] = to_string(out.method);
    j["alpha"] = elements_json(out.alpha);
    j["residual"] = check;
    j["extension"] = out.extension_used->to_text();
    j["verified"] = ok;
    if (opt.trace) j["trace"] = out.trace;

    std::vector<std::string> lines = {
        "method:    " + to_string(out.method),
        "f:         " + join_elements(out.alpha) + "   (coefficients, low degree first)",
        "residual:  " + std::to_string(check),
        "extension: " + out.extension_used->to_text(),
    };
    if (opt.trace)
        for (const auto& t : out.trace) lines.push_back("trace:     " + t);
    emit(j, opt, lines);
    return ok ? 0 : 2;
}

int cmd_verify(const CliOptions& opt) {
    FieldPtr field = make_field(opt);
    TargetVector target(opt.n, parse_element_list(field, opt.targets_text));
    auto alpha = parse_element_list(field, opt.alpha_text);
    const double residual = verify(alpha, target);
    const bool ok = field->finite()
                        ? residual == 0.0
                        : residual <= 1e-8 * (1.0 + max_target_mag(target.values));
    json j = base_json("verify", opt);
    j["n"] = opt.n;
    j["targets"] = elements_json(target.values);
    j["alpha"] = elements_json(alpha);
    j["residual"] = residual;
    j["ok"] = ok;
    emit(j, opt, {"residual: " + std::to_string(residual), std::string("ok:       ") + (ok ? "yes" : "no")});
    return ok ? 0 : 2;
}

int cmd_jacobian(const CliOptions& opt) {
    FieldPtr field = make_field(opt);
    auto point = parse_element_list(field, opt.alpha_text);
    StrideMap map(static_cast<unsigned>(point.size()) - 1, opt.n, field);
    JacobianReport rep = map.jacobian_at(point);
    json j = base_json("jacobian", opt);
    j["n"] = opt.n;
    j["m"] = map.m();
    j["point"] = elements_json(point);
    j.update(report_json(rep, field));
    std::vector<std::string> lines;
    for (const auto& row : rep.matrix) lines.push_back("[ " + join_elements(row) + " ]");
    lines.push_back(std::string("invertible: ") + (rep.invertible ? "yes" : "no"));
    emit(j, opt, lines);
    return 0;
}

int cmd_structure(const CliOptions& opt) {
    FieldPtr field = make_field(opt);
    StrideMap map(opt.m, opt.n, field);
    JacobianReport rep = map.special_point_structure();
    json j = base_json("structure", opt);
    j["n"] = opt.n;
    j["m"] = opt.m;
    j["gcd"] = std::gcd(opt.m, opt.n);
    j.update(report_json(rep, field));
    std::vector<std::string> lines;
    for (const auto& row : rep.matrix) lines.push_back("[ " + join_elements(row) + " ]");
    lines.push_back(std::string("invertible: ") + (rep.invertible ? "yes" : "no"));
    if (rep.permutation) {
        std::string sigma = "sigma (column -> 1-based row): ";
        for (std::size_t i = 0; i < rep.permutation->size(); ++i) {
            if (i) sigma += ',';
            sigma += std::to_string((*rep.permutation)[i] + 1);
        }
        lines.push_back(sigma);
        lines.push_back("diagonal: " + join_elements(*rep.diagonal_values));
    }
    emit(j, opt, lines);
    return 0;
}

int cmd_count(const CliOptions& opt) {
    FieldPtr field = make_field(opt);
    auto targets = parse_element_list(field, opt.targets_text);
    if (opt.m_given && opt.m + 1 != targets.size())
        throw std::invalid_argument("--m disagrees with the number of targets");
    FiberEstimate est = estimate_fiber_count(static_cast<unsigned>(targets.size()) - 1, opt.n,
                                             targets, opt.trials, opt.seed);
    json j = base_json("count", opt);
    j["n"] = opt.n;
    j["m"] = targets.size() - 1;
    j["targets"] = elements_json(targets);
    j["trials"] = est.trials_used;
    j["count"] = est.solutions.size();
    j["solutions"] = json::array();
    for (const auto& s : est.solutions) j["solutions"].push_back(elements_json(s));
    j["log"] = est.log;
    std::vector<std::string> lines = {"distinct solutions: " + std::to_string(est.solutions.size())};
    for (const auto& s : est.solutions) lines.push_back("  " + join_elements(s));
    for (const auto& line : est.log) lines.push_back(line);
    emit(j, opt, lines);
    return 0;
}

int cmd_oracle(const CliOptions& opt) {
    FieldPtr field = make_field(opt);
    auto targets = parse_element_list(field, opt.targets_text);
    if (opt.m_given && opt.m + 1 != targets.size())
        throw std::invalid_argument("--m disagrees with the number of targets");
    StrideMap map(static_cast<unsigned>(targets.size()) - 1, opt.n, field);
    auto fiber = map.brute_force_fiber(targets);
    json j = base_json("oracle", opt);
    j["n"] = opt.n;
    j["m"] = targets.size() - 1;
    j["targets"] = elements_json(targets);
    j["count"] = fiber.size();
    j["solutions"] = json::array();
    for (const auto& s : fiber) j["solutions"].push_back(elements_json(s));
    std::vector<std::string> lines = {"fiber size: " + std::to_string(fiber.size())};
    for (const auto& s : fiber) lines.push_back("  " + join_elements(s));
    emit(j, opt, lines);
    return 0;
}

int cmd_reduce(const CliOptions& opt) {
    FieldPtr field = make_field(opt);
    TargetVector target(opt.n, parse_element_list(field, opt.targets_text));
    CharPReduction red = reduce_char_p(target);
    json j = base_json("reduce", opt);
    j["n"] = opt.n;
    j["targets"] = elements_json(target.values);
    j["nPrime"] = red.n_prime;
    j["s"] = red.s;
    j["reduced"] = elements_json(red.reduced.values);
    emit(j, opt, {"n' = " + std::to_string(red.n_prime) + "  (s = " + std::to_string(red.s) + ")",
                  "reduced targets: " + join_elements(red.reduced.values)});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polynomials with prescribed stride-n power coefficients"};
    app.require_subcommand(1);
    CliOptions opt;

    auto add_common = [&](CLI::App* sub, bool with_targets) {
        sub->add_option("--field", opt.field_text, "field descriptor: C, F:p, or F:p^k:mod")
            ->required();
        if (with_targets)
            sub->add_option("--targets", opt.targets_text,
                            "comma-separated targets a_0,...,a_m (or @file)")
                ->required();
        sub->add_option("--seed", opt.seed, "random seed (echoed in output)");
        sub->add_option("--output", opt.output, "human or json")
            ->check(CLI::IsMember({"human", "json"}));
        sub->add_option("--epsilon", opt.epsilon, "comparison tolerance for C");
    };

    auto* solve_cmd = app.add_subcommand("solve", "construct f with the prescribed coefficients");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--n", opt.n, "the power n")->required();
    solve_cmd->add_option("--tolerance", opt.tolerance, "numeric acceptance tolerance");
    solve_cmd->add_option("--steps", opt.steps, "homotopy steps");
    solve_cmd->add_option("--newton-iters", opt.newton_iters, "Newton iterations per step");
    solve_cmd->add_option("--max-restarts", opt.max_restarts, "restart budget");
    solve_cmd->add_flag("--trace", opt.trace, "include the step trace");

    auto* verify_cmd = app.add_subcommand("verify", "check a candidate coefficient tuple");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--n", opt.n, "the power n")->required();
    verify_cmd->add_option("--alpha", opt.alpha_text, "candidate coefficients")->required();

    auto* jac_cmd = app.add_subcommand("jacobian", "Jacobian of the map at a point");
    add_common(jac_cmd, false);
    jac_cmd->add_option("--n", opt.n, "the power n")->required();
    jac_cmd->add_option("--point", opt.alpha_text, "evaluation point alpha_0,...,alpha_m")
        ->required();

    auto* struct_cmd = app.add_subcommand("structure", "Jacobian structure at (1,0,...,0,1)");
    add_common(struct_cmd, false);
    struct_cmd->add_option("--n", opt.n, "the power n")->required();
    struct_cmd->add_option("--m", opt.m, "degree bound m")->required();

    auto* count_cmd = app.add_subcommand("count", "fiber-size experiment over C");
    add_common(count_cmd, true);
    count_cmd->add_option("--n", opt.n, "the power n")->required();
    count_cmd->add_option("--m", opt.m, "degree bound m (must match the target count)")
        ->each([&opt](const std::string&) { opt.m_given = true; });
    count_cmd->add_option("--trials", opt.trials, "number of solve attempts");
    count_cmd->add_option("--tolerance", opt.tolerance, "numeric acceptance tolerance");

    auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive fiber enumeration (finite fields)");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--n", opt.n, "the power n")->required();
    oracle_cmd->add_option("--m", opt.m, "degree bound m (must match the target count)")
        ->each([&opt](const std::string&) { opt.m_given = true; });

    auto* reduce_cmd = app.add_subcommand("reduce", "characteristic-p reduction of the instance");
    add_common(reduce_cmd, true);
    reduce_cmd->add_option("--n", opt.n, "the power n")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(opt);
        if (verify_cmd->parsed()) return cmd_verify(opt);
        if (jac_cmd->parsed()) return cmd_jacobian(opt);
        if (struct_cmd->parsed()) return cmd_structure(opt);
        if (count_cmd->parsed()) return cmd_count(opt);
        if (oracle_cmd->parsed()) return cmd_oracle(opt);
        if (reduce_cmd->parsed()) return cmd_reduce(opt);
    } catch (const UnsupportedInstanceError& e) {
        std::cerr << "unsupported instance: " << e.what() << "\n";
        return 3;
    } catch (const NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const RootFindingError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
