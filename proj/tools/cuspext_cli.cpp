// Command-line front end. All functionality goes through the shared C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cuspext.h"

namespace {

struct ScenarioFlags {
    std::string domain = "ms";
    double s = 1.5;
    int j0 = 6;
    std::string construction = "simple";
    std::string delta = "exp";
    double p = 2.0;
    unsigned seed = 12345;
    int threads = 0;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
    cmd->add_option("--domain", f.domain, "ms | cardioid")->check(CLI::IsMember({"ms", "cardioid"}));
    cmd->add_option("--s", f.s, "cusp degree (> 1, ms domain)");
    cmd->add_option("--j0", f.j0, "dyadic start index");
    cmd->add_option("--construction", f.construction, "simple | squeezed")
        ->check(CLI::IsMember({"simple", "squeezed"}));
    cmd->add_option("--delta", f.delta, "squeeze width law: exp | powerlog")
        ->check(CLI::IsMember({"exp", "powerlog"}));
    cmd->add_option("--p", f.p, "power-log squeeze exponent (> 1)");
    cmd->add_option("--seed", f.seed, "sampling seed");
    cmd->add_option("--threads", f.threads, "worker threads (0 = auto)");
}

std::string scenario_json(const ScenarioFlags& f) {
    std::ostringstream os;
    os << "{\"domain\":\"" << f.domain << "\",\"s\":" << f.s << ",\"j0\":" << f.j0
       << ",\"construction\":\"" << f.construction << "\",\"delta\":\"" << f.delta
       << "\",\"p\":" << f.p << ",\"seed\":" << f.seed << ",\"threads\":" << f.threads << "}";
    return os.str();
}

struct ScenarioHandle {
    cuspext_scenario* sc = nullptr;
    ~ScenarioHandle() {
        if (sc) cuspext_scenario_destroy(sc);
    }
};

int open_scenario(const ScenarioFlags& f, ScenarioHandle& h) {
    char err[256] = {0};
    h.sc = cuspext_scenario_create(scenario_json(f).c_str(), err, sizeof(err));
    if (!h.sc) {
        std::cerr << "configuration error: " << err << "\n";
        return 2;
    }
    return 0;
}

int rc_to_exit(int rc) {
    if (rc == CUSPEXT_OK) return 0;
    std::cerr << "error: " << cuspext_error_name(rc) << "\n";
    return rc == CUSPEXT_ERR_INVALID_ARGUMENT ? 2 : 1;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::string grid_json(const std::vector<double>& g) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i];
    os << "]";
    return os.str();
}

std::string json_escape_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-distortion extensions of the complex square map off cusp domains"};
    app.require_subcommand(1);

    // ---- thresholds ----
    auto* cmd_thresholds = app.add_subcommand("thresholds", "closed-form critical exponents");
    std::string th_s = "3/2", th_p;
    cmd_thresholds->add_option("--s", th_s, "cusp degree as a rational, e.g. 3/2")->required();
    cmd_thresholds->add_option("--p", th_p, "gradient exponent as a rational (optional)");

    // ---- boundary ----
    auto* cmd_boundary = app.add_subcommand("boundary", "export the model boundary curve as CSV");
    double b_s = 1.5;
    int b_n = 1024;
    std::string b_out = "boundary.csv";
    cmd_boundary->add_option("--s", b_s, "cusp degree")->required();
    cmd_boundary->add_option("--n", b_n, "samples per wall branch");
    cmd_boundary->add_option("--out", b_out, "output CSV path")->required();

    // ---- eval ----
    auto* cmd_eval = app.add_subcommand("eval", "evaluate the plane map on a CSV of points");
    ScenarioFlags ef;
    add_scenario_flags(cmd_eval, ef);
    std::string e_points, e_out = "-";
    bool e_shifted = false;
    cmd_eval->add_option("--points", e_points, "CSV of x,y rows")->required();
    cmd_eval->add_option("--out", e_out, "output JSON path (- for stdout)");
    cmd_eval->add_flag("--shifted", e_shifted,
                       "evaluate the unit-disk extension (cardioid domain only)");

    // ---- exponents ----
    auto* cmd_exp = app.add_subcommand("exponents", "dyadic series and critical exponent scans");
    ScenarioFlags xf;
    add_scenario_flags(cmd_exp, xf);
    int x_jmin = -1, x_jmax = -1;
    std::vector<std::string> x_quantities;
    std::string x_qgrid, x_pgrid, x_out = "reports";
    bool x_scan = false;
    cmd_exp->add_option("--jmin", x_jmin, "first dyadic index (default j0)");
    cmd_exp->add_option("--jmax", x_jmax, "last dyadic index");
    cmd_exp->add_option("--quantity", x_quantities, "Kf | Kfinv | Df | Dfinv | J (repeatable)");
    cmd_exp->add_option("--q", x_qgrid, "comma list of distortion exponents");
    cmd_exp->add_option("--p-exp", x_pgrid, "comma list of gradient exponents");
    cmd_exp->add_flag("--scan", x_scan, "bisect for the critical exponent too");
    cmd_exp->add_option("--out", x_out, "output directory");

    // ---- render ----
    auto* cmd_render = app.add_subcommand("render", "grid-warp or distortion heatmap PPM");
    ScenarioFlags rf;
    add_scenario_flags(cmd_render, rf);
    std::string r_mode = "heatmap", r_viewport = "-2,2,-2,2", r_out = "out.ppm";
    int r_width = 512, r_height = 512, r_density = 24;
    cmd_render->add_option("--mode", r_mode, "grid | heatmap")
        ->check(CLI::IsMember({"grid", "heatmap"}));
    cmd_render->add_option("--viewport", r_viewport, "x0,x1,y0,y1");
    cmd_render->add_option("--width", r_width, "pixels");
    cmd_render->add_option("--height", r_height, "pixels");
    cmd_render->add_option("--grid-density", r_density, "grid lines per axis");
    cmd_render->add_option("--out", r_out, "output PPM path")->required();

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "run the invariant suite");
    ScenarioFlags vf;
    add_scenario_flags(cmd_verify, vf);
    bool v_quick = false;
    std::string v_out;
    cmd_verify->add_flag("--quick", v_quick, "skip the slope spot checks");
    cmd_verify->add_option("--out", v_out, "write the JSON summary here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (cmd_thresholds->parsed()) {
        char* out = nullptr;
        int rc = cuspext_thresholds(th_s.c_str(), th_p.empty() ? nullptr : th_p.c_str(), &out);
        if (rc != CUSPEXT_OK) return rc_to_exit(rc);
        std::cout << out << "\n";
        cuspext_string_free(out);
        return 0;
    }

    if (cmd_boundary->parsed()) {
        ScenarioFlags f;
        f.s = b_s;
        ScenarioHandle h;
        if (int rc = open_scenario(f, h)) return rc;
        return rc_to_exit(cuspext_boundary_csv(h.sc, b_n, b_out.c_str()));
    }

    if (cmd_eval->parsed()) {
        ScenarioHandle h;
        if (int rc = open_scenario(ef, h)) return rc;
        std::ifstream in(e_points);
        if (!in) {
            std::cerr << "cannot open points file: " << e_points << "\n";
            return 2;
        }
        std::ostringstream out;
        out << "[";
        std::string line;
        int lineno = 0;
        bool first = true;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line == "x,y") continue;
            double x, y;
            if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2) {
                std::cerr << "malformed row at line " << lineno << ": " << line << "\n";
                return 2;
            }
            cuspext_eval_result res;
            int rc = e_shifted ? cuspext_eval_shifted(h.sc, x, y, &res)
                               : cuspext_eval(h.sc, x, y, &res);
            if (rc != CUSPEXT_OK) return rc_to_exit(rc);
            if (!first) out << ",";
            first = false;
            out << "\n  {\"input\":[" << json_escape_number(x) << "," << json_escape_number(y)
                << "],\"region\":\"" << res.region << "\",\"image\":["
                << json_escape_number(res.image_x) << "," << json_escape_number(res.image_y)
                << "]";
            if (res.has_jacobian)
                out << ",\"jacobian\":[[" << json_escape_number(res.jac[0]) << ","
                    << json_escape_number(res.jac[1]) << "],[" << json_escape_number(res.jac[2])
                    << "," << json_escape_number(res.jac[3]) << "]]";
            if (res.has_distortion) out << ",\"K\":" << json_escape_number(res.distortion);
            out << "}";
        }
        out << "\n]\n";
        if (e_out == "-") {
            std::cout << out.str();
        } else {
            std::ofstream f(e_out);
            if (!f) {
                std::cerr << "cannot write " << e_out << "\n";
                return 2;
            }
            f << out.str();
        }
        return 0;
    }

    if (cmd_exp->parsed()) {
        ScenarioHandle h;
        if (int rc = open_scenario(xf, h)) return rc;
        if (x_jmin < 0) x_jmin = xf.domain == "cardioid" ? xf.j0 / 2 : xf.j0;
        if (x_jmax < 0) x_jmax = x_jmin + 8;
        std::vector<double> qgrid =
            x_qgrid.empty() ? std::vector<double>{} : parse_grid(x_qgrid);
        std::vector<double> pgrid =
            x_pgrid.empty() ? std::vector<double>{} : parse_grid(x_pgrid);
        bool squeezed = xf.construction == "squeezed";
        if (x_quantities.empty()) {
            if (squeezed)
                x_quantities = {"Df", "Kf"};
            else
                x_quantities = {"Kf", "Kfinv", "Dfinv"};
            x_scan = true;
        }
        std::ostringstream cfg;
        cfg << "{\"jmin\":" << x_jmin << ",\"jmax\":" << x_jmax << ",\"quantities\":[";
        bool first = true;
        for (const std::string& name : x_quantities) {
            std::vector<double> grid;
            std::string bracket;
            double s_eff = xf.domain == "cardioid" ? 1.5 : xf.s;
            if (name == "Kf") {
                grid = qgrid.empty() ? std::vector<double>{1, 2, 3} : qgrid;
                if (squeezed)
                    bracket = "[0.3,1.2]";
                else
                    bracket = "[" + json_escape_number(0.3 / (s_eff - 1)) + "," +
                              json_escape_number(2.2 / (s_eff - 1)) + "]";
            } else if (name == "Kfinv") {
                grid = qgrid.empty() ? std::vector<double>{3, 5, 7} : qgrid;
                double c = (s_eff + 1) / (s_eff - 1);
                bracket = "[" + json_escape_number(0.4 * c) + "," + json_escape_number(1.6 * c) + "]";
            } else if (name == "Dfinv") {
                grid = pgrid.empty() ? std::vector<double>{2, 2.5, 3} : pgrid;
                double c = 2 * (s_eff + 1) / (2 * s_eff - 1);
                bracket = "[" + json_escape_number(0.55 * c) + "," + json_escape_number(1.6 * c) + "]";
            } else if (name == "Df") {
                grid = pgrid.empty() ? std::vector<double>{1, 2} : pgrid;
            } else if (name == "J") {
                grid = {1};
            } else {
                std::cerr << "unknown quantity " << name << "\n";
                return 2;
            }
            if (!first) cfg << ",";
            first = false;
            cfg << "{\"name\":\"" << name << "\",\"exponents\":" << grid_json(grid);
            if (x_scan && !bracket.empty()) cfg << ",\"scan\":" << bracket;
            cfg << "}";
        }
        cfg << "]}";
        char* summary = nullptr;
        int rc = cuspext_exponents(h.sc, cfg.str().c_str(), x_out.c_str(), &summary);
        if (rc != CUSPEXT_OK) return rc_to_exit(rc);
        std::cout << summary << "\n";
        cuspext_string_free(summary);
        return 0;
    }

    if (cmd_render->parsed()) {
        ScenarioHandle h;
        if (int rc = open_scenario(rf, h)) return rc;
        std::vector<double> vp = parse_grid(r_viewport);
        if (vp.size() != 4) {
            std::cerr << "viewport must be x0,x1,y0,y1\n";
            return 2;
        }
        std::ostringstream spec;
        spec << "{\"mode\":\"" << r_mode << "\",\"x0\":" << vp[0] << ",\"x1\":" << vp[1]
             << ",\"y0\":" << vp[2] << ",\"y1\":" << vp[3] << ",\"width\":" << r_width
             << ",\"height\":" << r_height << ",\"grid_density\":" << r_density << "}";
        return rc_to_exit(cuspext_render(h.sc, spec.str().c_str(), r_out.c_str()));
    }

    if (cmd_verify->parsed()) {
        ScenarioHandle h;
        if (int rc = open_scenario(vf, h)) return rc;
        char* report = nullptr;
        int rc = cuspext_verify(h.sc, v_quick ? 0 : 1, &report);
        if (report) {
            if (v_out.empty()) {
                std::cout << report << "\n";
            } else {
                std::ofstream f(v_out);
                f << report << "\n";
            }
            cuspext_string_free(report);
        }
        if (rc == CUSPEXT_OK) return 0;
        if (rc == CUSPEXT_ERR_VERIFY_FAILED) {
            std::cerr << "verification failed\n";
            return 1;
        }
        return rc_to_exit(rc);
    }

    return 2;
}
