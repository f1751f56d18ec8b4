#include "cuspext.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <sstream>

#include "cuspext/extension.hpp"
#include "cuspext/io.hpp"
#include "cuspext/probes.hpp"
#include "cuspext/quadrature.hpp"
#include "cuspext/render.hpp"
#include "cuspext/verify.hpp"
#include "json.hpp"

using nlohmann::json;

struct cuspext_scenario {
    cuspext::Scenario config;
    cuspext::PlaneExtension ext;
    int threads = 0;

    explicit cuspext_scenario(const cuspext::Scenario& c) : config(c), ext(c) {}
};

namespace {

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void fill_err(char* err, size_t errlen, const std::string& msg) {
    if (!err || errlen == 0) return;
    std::snprintf(err, errlen, "%s", msg.c_str());
}

int classify_exception() {
    try {
        throw;
    } catch (const std::domain_error&) {
        return CUSPEXT_ERR_OUT_OF_DOMAIN;
    } catch (const std::invalid_argument&) {
        return CUSPEXT_ERR_INVALID_ARGUMENT;
    } catch (const json::exception&) {
        return CUSPEXT_ERR_INVALID_ARGUMENT;
    } catch (const std::ios_base::failure&) {
        return CUSPEXT_ERR_IO;
    } catch (const std::runtime_error&) {
        return CUSPEXT_ERR_IO;
    } catch (...) {
        return CUSPEXT_ERR_INTERNAL;
    }
}

cuspext::Scenario parse_config(const char* config_json) {
    cuspext::Scenario sc;
    if (!config_json || !*config_json) return sc;
    json j = json::parse(config_json);
    std::string domain = j.value("domain", "ms");
    if (domain == "ms")
        sc.domain = cuspext::DomainKind::CuspFamily;
    else if (domain == "cardioid")
        sc.domain = cuspext::DomainKind::Cardioid;
    else
        throw std::invalid_argument("domain must be ms or cardioid");
    sc.s = j.value("s", 1.5);
    sc.j0 = j.value("j0", 6);
    std::string cons = j.value("construction", "simple");
    if (cons == "simple")
        sc.construction = cuspext::ConstructionKind::Simple;
    else if (cons == "squeezed")
        sc.construction = cuspext::ConstructionKind::Squeezed;
    else
        throw std::invalid_argument("construction must be simple or squeezed");
    std::string dm = j.value("delta", "exp");
    if (dm == "exp")
        sc.squeeze.mode = cuspext::SqueezeParams::Mode::Exp;
    else if (dm == "powerlog")
        sc.squeeze.mode = cuspext::SqueezeParams::Mode::PowerLog;
    else
        throw std::invalid_argument("delta must be exp or powerlog");
    sc.squeeze.p = j.value("p", 2.0);
    sc.seed = j.value("seed", 12345u);
    return sc;
}

void fill_eval(const cuspext::PlaneExtension& ext, cuspext::Vec2 z, cuspext_eval_result* out) {
    cuspext::RegionInfo info = ext.classify(z);
    cuspext::Vec2 w = ext.eval(z);
    std::memset(out, 0, sizeof(*out));
    out->image_x = w.x;
    out->image_y = w.y;
    std::snprintf(out->region, sizeof(out->region), "%s", info.name().c_str());
    out->cell_index = info.tag == cuspext::RegionInfo::Tag::Cells ? info.cell_index : -1;
    if (ext.has_analytic_jacobian(z)) {
        cuspext::Mat2 m = ext.jacobian(z);
        out->has_jacobian = 1;
        out->jac[0] = (double)m.a11;
        out->jac[1] = (double)m.a12;
        out->jac[2] = (double)m.a21;
        out->jac[3] = (double)m.a22;
        if (m.det() > 0) {
            out->has_distortion = 1;
            out->distortion = (double)cuspext::distortion(m);
        }
    }
}

int max_delta_capped_index(const cuspext::Scenario& sc) {
    if (sc.construction != cuspext::ConstructionKind::Squeezed) return 10000;
    if (sc.squeeze.mode != cuspext::SqueezeParams::Mode::Exp) return 10000;
    return 14;  // exp(-2^j) underflows the extended format past this
}

}  // namespace

extern "C" {

const char* cuspext_version(void) { return "1.0.0"; }

const char* cuspext_error_name(int code) {
    switch (code) {
        case CUSPEXT_OK: return "ok";
        case CUSPEXT_ERR_INVALID_ARGUMENT: return "invalid argument";
        case CUSPEXT_ERR_OUT_OF_DOMAIN: return "out of domain";
        case CUSPEXT_ERR_IO: return "io error";
        case CUSPEXT_ERR_NUMERIC: return "numeric failure";
        case CUSPEXT_ERR_VERIFY_FAILED: return "verification failed";
        case CUSPEXT_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

void cuspext_string_free(char* s) { delete[] s; }

cuspext_scenario* cuspext_scenario_create(const char* config_json, char* err, size_t errlen) {
    try {
        cuspext::Scenario sc = parse_config(config_json);
        auto* handle = new cuspext_scenario(sc);
        if (config_json && *config_json) {
            json j = json::parse(config_json);
            handle->threads = j.value("threads", 0);
        }
        return handle;
    } catch (const std::exception& e) {
        fill_err(err, errlen, e.what());
        return nullptr;
    } catch (...) {
        fill_err(err, errlen, "internal error");
        return nullptr;
    }
}

void cuspext_scenario_destroy(cuspext_scenario* sc) { delete sc; }

int cuspext_scenario_describe(const cuspext_scenario* sc, char** json_out) {
    if (!sc || !json_out) return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        *json_out = dup_string(sc->ext.descriptor_json());
        return CUSPEXT_OK;
    } catch (...) {
        return classify_exception();
    }
}

int cuspext_set_threads(cuspext_scenario* sc, int threads) {
    if (!sc) return CUSPEXT_ERR_INVALID_ARGUMENT;
    sc->threads = threads;
    return CUSPEXT_OK;
}

int cuspext_eval(const cuspext_scenario* sc, double x, double y, cuspext_eval_result* out) {
    if (!sc || !out) return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        fill_eval(sc->ext, {x, y}, out);
        return CUSPEXT_OK;
    } catch (...) {
        return classify_exception();
    }
}

int cuspext_eval_shifted(const cuspext_scenario* sc, double x, double y,
                         cuspext_eval_result* out) {
    if (!sc || !out) return CUSPEXT_ERR_INVALID_ARGUMENT;
    if (sc->config.domain != cuspext::DomainKind::Cardioid) return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        fill_eval(sc->ext, {x + 1.0, y}, out);
        return CUSPEXT_OK;
    } catch (...) {
        return classify_exception();
    }
}

int cuspext_boundary_csv(const cuspext_scenario* sc, int samples_per_branch, const char* path) {
    if (!sc || !path || samples_per_branch < 2) return CUSPEXT_ERR_INVALID_ARGUMENT;
    if (sc->config.domain != cuspext::DomainKind::CuspFamily) return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        const cuspext::BoundaryCurve* bc = sc->ext.boundary();
        std::ostringstream out;
        out << "branch,u,x,y\n";
        double s = sc->config.s;
        for (int i = 0; i < samples_per_branch; ++i) {
            double u = -1.0 + double(i) / samples_per_branch;
            cuspext::CuspArcPoint p = cuspext::ellm_point(s, u, cuspext::Branch::Upper);
            out << "upper," << cuspext::format_g17(u) << "," << cuspext::format_g17(p.x) << ","
                << cuspext::format_g17(p.y) << "\n";
        }
        for (int i = 0; i < samples_per_branch; ++i) {
            double u = -1.0 + double(i) / samples_per_branch;
            cuspext::CuspArcPoint p = cuspext::ellm_point(s, u, cuspext::Branch::Lower);
            out << "lower," << cuspext::format_g17(u) << "," << cuspext::format_g17(p.x) << ","
                << cuspext::format_g17(p.y) << "\n";
        }
        const cuspext::ClosingArc& arc = bc->closing_arc();
        int narc = samples_per_branch / 2 + 2;
        for (int i = 0; i <= narc; ++i) {
            double psi = -arc.psi1 + 2.0 * arc.psi1 * i / narc;
            cuspext::Vec2 p = arc.point(psi);
            out << "arc," << cuspext::format_g17(psi) << "," << cuspext::format_g17(p.x) << ","
                << cuspext::format_g17(p.y) << "\n";
        }
        cuspext::write_text_file(path, out.str());
        return CUSPEXT_OK;
    } catch (...) {
        return classify_exception();
    }
}

int cuspext_series(const cuspext_scenario* sc, const char* quantity, double exponent, int jmin,
                   int jmax, cuspext_series_result* out) {
    if (!sc || !quantity || !out) return CUSPEXT_ERR_INVALID_ARGUMENT;
    auto q = cuspext::parse_quantity(quantity);
    if (!q) return CUSPEXT_ERR_INVALID_ARGUMENT;
    if (jmin < sc->ext.first_cell_index() || jmax < jmin ||
        jmax - jmin + 1 > CUSPEXT_MAX_SERIES || jmax > max_delta_capped_index(sc->config))
        return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        cuspext::CellFamily fam{sc->ext.profile(),
                                sc->config.construction == cuspext::ConstructionKind::Squeezed,
                                sc->config.squeeze};
        cuspext::QuadratureParams qp;
        cuspext::SeriesReport rep =
            cuspext::dyadic_series(fam, *q, exponent, jmin, jmax, qp, 0.1, sc->threads);
        std::memset(out, 0, sizeof(*out));
        out->jmin = jmin;
        out->jmax = jmax;
        out->exponent = exponent;
        out->count = (int)rep.integrals.size();
        for (int i = 0; i < out->count; ++i) {
            out->integral[i] = (double)rep.integrals[i];
            out->log2_integral[i] = (double)log2l(rep.integrals[i]);
        }
        out->slope = rep.slope;
        std::snprintf(out->verdict, sizeof(out->verdict), "%s", rep.verdict.c_str());
        return CUSPEXT_OK;
    } catch (...) {
        return classify_exception();
    }
}

int cuspext_scan(const cuspext_scenario* sc, const char* quantity, double lo, double hi, int jmin,
                 int jmax, cuspext_scan_result* out) {
    if (!sc || !quantity || !out) return CUSPEXT_ERR_INVALID_ARGUMENT;
    auto q = cuspext::parse_quantity(quantity);
    if (!q || !(hi > lo)) return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        cuspext::CellFamily fam{sc->ext.profile(),
                                sc->config.construction == cuspext::ConstructionKind::Squeezed,
                                sc->config.squeeze};
        cuspext::QuadratureParams qp;
        cuspext::ScanResult res =
            cuspext::critical_exponent_scan(fam, *q, lo, hi, jmin, jmax, qp, 0.02, sc->threads);
        if (!res.ok) return CUSPEXT_ERR_NUMERIC;
        out->exponent = res.exponent;
        out->slope = res.slope;
        out->uncertainty = res.uncertainty;
        out->iterations = res.iterations;
        return CUSPEXT_OK;
    } catch (...) {
        return classify_exception();
    }
}

int cuspext_exponents(const cuspext_scenario* sc, const char* config_json, const char* out_dir,
                      char** summary_json) {
    if (!sc || !config_json || !out_dir) return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        json cfg = json::parse(config_json);
        int jmin = cfg.value("jmin", sc->ext.first_cell_index());
        int jmax = cfg.value("jmax", jmin + 8);
        if (jmin < sc->ext.first_cell_index() || jmax < jmin ||
            jmax > max_delta_capped_index(sc->config))
            return CUSPEXT_ERR_INVALID_ARGUMENT;
        std::filesystem::create_directories(out_dir);
        cuspext::CellFamily fam{sc->ext.profile(),
                                sc->config.construction == cuspext::ConstructionKind::Squeezed,
                                sc->config.squeeze};
        cuspext::QuadratureParams qp;
        json scenario_desc = json::parse(sc->ext.descriptor_json());
        json summary;
        summary["scenario"] = scenario_desc;
        summary["series"] = json::array();
        summary["scans"] = json::array();
        for (const auto& item : cfg.at("quantities")) {
            std::string name = item.at("name");
            auto q = cuspext::parse_quantity(name);
            if (!q) return CUSPEXT_ERR_INVALID_ARGUMENT;
            for (double e : item.value("exponents", std::vector<double>{})) {
                cuspext::SeriesReport rep =
                    cuspext::dyadic_series(fam, *q, e, jmin, jmax, qp, 0.1, sc->threads);
                json jr;
                jr["scenario"] = scenario_desc;
                jr["quantity"] = name;
                jr["exponent"] = e;
                json jj = json::array(), ji = json::array();
                std::ostringstream csv;
                csv << "j,integral,log2_ratio\n";
                for (size_t i = 0; i < rep.integrals.size(); ++i) {
                    jj.push_back(jmin + (int)i);
                    ji.push_back((double)rep.integrals[i]);
                    csv << (jmin + (int)i) << ","
                        << cuspext::format_g17l(rep.integrals[i]) << ",";
                    if (i + 1 < rep.integrals.size())
                        csv << cuspext::format_g17(rep.log2_ratios[i]);
                    csv << "\n";
                }
                jr["j"] = jj;
                jr["integral"] = ji;
                jr["log2_integral"] = [&] {
                    json arr = json::array();
                    for (auto v : rep.integrals) arr.push_back((double)log2l(v));
                    return arr;
                }();
                jr["slope"] = rep.slope;
                jr["verdict"] = rep.verdict;
                std::ostringstream base;
                base << out_dir << "/" << name << "_e" << cuspext::format_g17(e);
                cuspext::write_text_file(base.str() + ".json", jr.dump(2));
                cuspext::write_text_file(base.str() + ".csv", csv.str());
                summary["series"].push_back(jr);
            }
            if (item.contains("scan")) {
                double lo = item["scan"][0], hi = item["scan"][1];
                cuspext::ScanResult res = cuspext::critical_exponent_scan(
                    fam, *q, lo, hi, jmin, jmax, qp, 0.02, sc->threads);
                json js;
                js["quantity"] = name;
                js["ok"] = res.ok;
                if (res.ok) {
                    js["critical_exponent"] = res.exponent;
                    js["slope"] = res.slope;
                    js["uncertainty"] = res.uncertainty;
                }
                summary["scans"].push_back(js);
            }
        }
        std::string dump = summary.dump(2);
        cuspext::write_text_file(std::string(out_dir) + "/summary.json", dump);
        if (summary_json) *summary_json = dup_string(dump);
        return CUSPEXT_OK;
    } catch (...) {
        return classify_exception();
    }
}

int cuspext_render(const cuspext_scenario* sc, const char* spec_json, const char* path) {
    if (!sc || !spec_json || !path) return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        json j = json::parse(spec_json);
        cuspext::ImageSpec spec;
        spec.x0 = j.value("x0", -2.0);
        spec.x1 = j.value("x1", 2.0);
        spec.y0 = j.value("y0", -2.0);
        spec.y1 = j.value("y1", 2.0);
        spec.width = j.value("width", 512);
        spec.height = j.value("height", 512);
        spec.grid_density = j.value("grid_density", 24);
        std::string mode = j.value("mode", "heatmap");
        cuspext::Image img;
        if (mode == "grid")
            img = cuspext::render_grid_warp(sc->ext, spec);
        else if (mode == "heatmap")
            img = cuspext::render_heatmap(sc->ext, spec);
        else
            return CUSPEXT_ERR_INVALID_ARGUMENT;
        cuspext::write_ppm(img, path);
        return CUSPEXT_OK;
    } catch (...) {
        return classify_exception();
    }
}

int cuspext_verify(const cuspext_scenario* sc, int full, char** report_json) {
    if (!sc) return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        cuspext::VerifyReport rep =
            cuspext::run_verification(sc->config, sc->threads, full != 0);
        if (report_json)
            *report_json =
                dup_string(cuspext::verify_report_json(rep, sc->ext.descriptor_json()));
        return rep.pass() ? CUSPEXT_OK : CUSPEXT_ERR_VERIFY_FAILED;
    } catch (...) {
        return classify_exception();
    }
}

int cuspext_thresholds(const char* s, const char* p, char** json_out) {
    if (!s || !json_out) return CUSPEXT_ERR_INVALID_ARGUMENT;
    try {
        cuspext::Rational rs = cuspext::parse_rational(s);
        std::optional<cuspext::Rational> rp;
        if (p && *p) rp = cuspext::parse_rational(p);
        cuspext::ThresholdSet t = cuspext::thresholds(rs, rp);
        json j;
        j["s"] = rs.str();
        j["q_Kf"] = t.q_distortion.str();
        j["q_Kf_value"] = t.q_distortion.value();
        j["p_Dfinv"] = t.p_inverse_gradient.str();
        j["p_Dfinv_value"] = t.p_inverse_gradient.value();
        j["q_Kfinv"] = t.q_inverse_distortion.str();
        j["q_Kfinv_value"] = t.q_inverse_distortion.value();
        if (t.q_combined) {
            j["p"] = rp->str();
            j["q_combined"] = t.q_combined->str();
            j["q_combined_value"] = t.q_combined->value();
        }
        *json_out = dup_string(j.dump(2));
        return CUSPEXT_OK;
    } catch (...) {
        return classify_exception();
    }
}

}  // extern "C"
