#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cda/algebra.hpp"
#include "cda/errors.hpp"
#include "cda/gaussian_int.hpp"
#include "cda/number_field.hpp"

namespace cda {

/* Raw algebra description as it appears in a config file. Integers are
 * carried as decimal strings for exactness; embedding seeds are decimal
 * floats that get polished against min_poly at build time. */
struct AlgebraSpec {
    std::string name;
    int degree = 0;
    std::vector<GaussianInt> min_poly;           // c_0 .. c_n, monic
    std::vector<FieldElement> sigma_basis;       // sigma(w_j) in the basis
    GaussianInt gamma;
    std::vector<std::pair<double, double>> embedding_seeds;
    UnitData units;
};

namespace cfg_detail {

using nlohmann::json;

inline GaussianInt parse_gaussian(const json &j, const std::string &where,
                                  std::vector<std::string> &diags) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
        diags.push_back(where + ": expected [\"re\",\"im\"] decimal strings");
        return {};
    }
    try {
        return {parse_zint(j[0].get<std::string>()), parse_zint(j[1].get<std::string>())};
    } catch (const config_error &e) {
        diags.push_back(where + ": " + e.what());
        return {};
    }
}

inline FieldElement parse_field_element(const json &j, int n, const std::string &where,
                                        std::vector<std::string> &diags) {
    FieldElement x(n);
    if (!j.is_array() || int(j.size()) != n) {
        diags.push_back(where + ": expected " + std::to_string(n) + " coordinates");
        return x;
    }
    for (int k = 0; k < n; ++k)
        x.c[k] = parse_gaussian(j[k], where + "[" + std::to_string(k) + "]", diags);
    return x;
}

inline double parse_decimal(const json &j, const std::string &where,
                            std::vector<std::string> &diags) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        try {
            std::size_t pos = 0;
            double v = std::stod(j.get<std::string>(), &pos);
            if (pos == j.get<std::string>().size()) return v;
        } catch (const std::exception &) {
        }
    }
    diags.push_back(where + ": expected a decimal number");
    return 0.0;
}

} // namespace cfg_detail

/* Parse a config file into an AlgebraSpec. Collects all structural problems
 * instead of stopping at the first; throws config_error listing them. */
inline AlgebraSpec parse_config(const std::string &path) {
    using cfg_detail::json;
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }

    std::vector<std::string> diags;
    AlgebraSpec spec;

    spec.name = j.value("name", std::string("unnamed"));
    if (!j.contains("degree") || !j["degree"].is_string()) {
        diags.push_back("degree: required decimal string");
    } else {
        try {
            Zint d = parse_zint(j["degree"].get<std::string>());
            if (d >= 2 && d <= 8) spec.degree = int(d.convert_to<long>());
        } catch (const config_error &e) {
            diags.push_back(std::string("degree: ") + e.what());
        }
    }
    if (spec.degree < 2 || spec.degree > 8) {
        diags.push_back("degree: must be between 2 and 8");
        throw config_error("invalid config:\n  " + [&] {
            std::string s;
            for (std::size_t i = 0; i < diags.size(); ++i)
                s += (i ? "\n  " : "") + diags[i];
            return s;
        }());
    }
    const int n = spec.degree;

    if (!j.contains("min_poly") || !j["min_poly"].is_array() || int(j["min_poly"].size()) != n + 1) {
        diags.push_back("min_poly: expected " + std::to_string(n + 1) + " coefficients");
    } else {
        for (int k = 0; k <= n; ++k)
            spec.min_poly.push_back(cfg_detail::parse_gaussian(
                j["min_poly"][k], "min_poly[" + std::to_string(k) + "]", diags));
    }

    if (!j.contains("sigma") || !j["sigma"].is_array() || int(j["sigma"].size()) != n) {
        diags.push_back("sigma: expected " + std::to_string(n) + " basis images");
    } else {
        for (int k = 0; k < n; ++k)
            spec.sigma_basis.push_back(cfg_detail::parse_field_element(
                j["sigma"][k], n, "sigma[" + std::to_string(k) + "]", diags));
    }

    if (!j.contains("gamma")) {
        diags.push_back("gamma: required");
    } else {
        spec.gamma = cfg_detail::parse_gaussian(j["gamma"], "gamma", diags);
    }

    if (!j.contains("embeddings") || !j["embeddings"].is_array() ||
        int(j["embeddings"].size()) != n) {
        diags.push_back("embeddings: expected " + std::to_string(n) + " complex seeds");
    } else {
        for (int k = 0; k < n; ++k) {
            const auto &e = j["embeddings"][k];
            std::string where = "embeddings[" + std::to_string(k) + "]";
            if (!e.is_array() || e.size() != 2) {
                diags.push_back(where + ": expected [re, im]");
                continue;
            }
            double re = cfg_detail::parse_decimal(e[0], where + ".re", diags);
            double im = cfg_detail::parse_decimal(e[1], where + ".im", diags);
            spec.embedding_seeds.emplace_back(re, im);
        }
    }

    if (!j.contains("units") || !j["units"].is_object()) {
        diags.push_back("units: required object with roots_of_unity and fundamental");
    } else {
        const auto &u = j["units"];
        if (!u.contains("roots_of_unity") || !u["roots_of_unity"].is_string()) {
            diags.push_back("units.roots_of_unity: required decimal string");
        } else {
            try {
                Zint w = parse_zint(u["roots_of_unity"].get<std::string>());
                if (w < 1 || w > 1000)
                    diags.push_back("units.roots_of_unity: out of range");
                else
                    spec.units.roots_of_unity = w.convert_to<long>();
            } catch (const config_error &e) {
                diags.push_back(std::string("units.roots_of_unity: ") + e.what());
            }
        }
        if (!u.contains("fundamental") || !u["fundamental"].is_array())
            diags.push_back("units.fundamental: required array");
        else
            for (std::size_t k = 0; k < u["fundamental"].size(); ++k)
                spec.units.fundamental.push_back(cfg_detail::parse_field_element(
                    u["fundamental"][k], n, "units.fundamental[" + std::to_string(k) + "]",
                    diags));
    }

    if (!diags.empty()) {
        std::string s = "invalid config:";
        for (const auto &d : diags) s += "\n  " + d;
        throw config_error(s);
    }
    return spec;
}

/* Serialize back to the file format; exact round trip for everything but the
 * embedding seeds (17 significant digits, enough to reproduce the doubles). */
inline std::string serialize_config(const AlgebraSpec &spec) {
    using cfg_detail::json;
    auto g = [](const GaussianInt &z) {
        return json::array({z.re.str(), z.im.str()});
    };
    auto fe = [&](const FieldElement &x) {
        json a = json::array();
        for (const auto &z : x.c) a.push_back(g(z));
        return a;
    };
    json j;
    j["name"] = spec.name;
    j["degree"] = std::to_string(spec.degree);
    j["min_poly"] = json::array();
    for (const auto &z : spec.min_poly) j["min_poly"].push_back(g(z));
    j["sigma"] = json::array();
    for (const auto &x : spec.sigma_basis) j["sigma"].push_back(fe(x));
    j["gamma"] = g(spec.gamma);
    j["embeddings"] = json::array();
    for (auto [re, im] : spec.embedding_seeds) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", re);
        std::string res = buf;
        std::snprintf(buf, sizeof buf, "%.17g", im);
        j["embeddings"].push_back(json::array({res, std::string(buf)}));
    }
    j["units"]["roots_of_unity"] = std::to_string(spec.units.roots_of_unity);
    j["units"]["fundamental"] = json::array();
    for (const auto &x : spec.units.fundamental) j["units"]["fundamental"].push_back(fe(x));
    return j.dump(2) + "\n";
}

namespace cfg_detail {

/* Newton-polish an embedding seed against min_poly at quad precision. */
inline qcomplex polish_root(const std::vector<GaussianInt> &poly, qcomplex z) {
    const int n = int(poly.size()) - 1;
    for (int it = 0; it < 48; ++it) {
        qcomplex p(0), dp(0);
        for (int k = n; k >= 0; --k) {
            dp = dp * z + p;
            qcomplex c(qreal(poly[k].re.convert_to<double>()),
                       qreal(poly[k].im.convert_to<double>()));
            p = p * z + c;
        }
        if (dp.norm_sq() == 0) break;
        qcomplex step = qdiv(p, dp);
        z = z - step;
        if (to_double(step.norm_sq()) < 1e-64) break;
    }
    return z;
}

inline qreal poly_residual(const std::vector<GaussianInt> &poly, const qcomplex &z) {
    qcomplex p(0);
    qreal scale = 1, zn = 1;
    qreal za = z.abs();
    for (int k = int(poly.size()) - 1; k >= 0; --k) {
        qcomplex c(qreal(poly[k].re.convert_to<double>()),
                   qreal(poly[k].im.convert_to<double>()));
        p = p * z + c;
    }
    for (std::size_t k = 0; k < poly.size(); ++k) {
        qreal ca = qsqrt(qreal(poly[k].norm().convert_to<double>()));
        if (ca * zn > scale) scale = ca * zn;
        zn = zn * za;
    }
    return p.abs() / scale;
}

} // namespace cfg_detail

/* Build the validated algebra. precision_bits scales the verification
 * tolerance 2^(-p/2); intermediates always carry quad precision, which covers
 * the accepted range. Throws config_error listing every violated invariant. */
inline CyclicAlgebra build_algebra(const AlgebraSpec &spec, int precision_bits = 128) {
    if (precision_bits < 64 || precision_bits > 192)
        throw config_error("precision_bits must lie in [64, 192]");
    const int n = spec.degree;
    std::vector<std::string> diags;

    // polish embeddings before constructing the field
    std::vector<qcomplex> emb;
    for (auto [re, im] : spec.embedding_seeds)
        emb.push_back(cfg_detail::polish_root(spec.min_poly, qcomplex(qreal(re), qreal(im))));

    const double tol = std::pow(2.0, -precision_bits / 2.0);
    for (int k = 0; k < n; ++k) {
        double res = to_double(cfg_detail::poly_residual(spec.min_poly, emb[k]));
        if (!(res <= tol))
            diags.push_back("embedding " + std::to_string(k) +
                            " does not satisfy min_poly (residual " + std::to_string(res) + ")");
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            qcomplex d = emb[a] - emb[b];
            if (to_double(d.norm_sq()) < 1e-12)
                diags.push_back("embeddings " + std::to_string(a) + " and " + std::to_string(b) +
                                " coincide; conjugates must be distinct");
        }
    if (!diags.empty()) {
        std::string s = "invalid config:";
        for (const auto &d : diags) s += "\n  " + d;
        throw config_error(s);
    }

    NumberField F(n, spec.min_poly, spec.sigma_basis, emb);

    // structural checks on sigma
    if (spec.sigma_basis[0] != F.one())
        diags.push_back("sigma must fix 1");
    // ring homomorphism on the power basis: sigma(theta)^j = sigma(theta^j)
    for (int jj = 2; jj < n; ++jj) {
        if (F.pow(spec.sigma_basis[1], jj) != spec.sigma_basis[jj]) {
            diags.push_back("sigma is not a ring homomorphism on the power basis (index " +
                            std::to_string(jj) + ")");
            break;
        }
    }
    // sigma(theta) must again be a root of min_poly
    if (!F.eval_min_poly(spec.sigma_basis[1]).is_zero())
        diags.push_back("sigma(theta) is not a root of min_poly");
    // order exactly n (sigma is determined by its action on theta)
    {
        FieldElement theta = F.basis_element(1);
        FieldElement img = theta;
        bool early = false;
        for (int t = 1; t < n; ++t) {
            img = F.sigma(1, img);
            if (img == theta) {
                diags.push_back("sigma has order " + std::to_string(t) + ", expected " +
                                std::to_string(n));
                early = true;
                break;
            }
        }
        if (!early && F.sigma(1, img) != theta)
            diags.push_back("sigma does not have order " + std::to_string(n));
    }
    // embedding compatibility: emb[(j+1) mod n] = sigma(theta) evaluated at emb[j]
    for (int jj = 0; jj < n; ++jj) {
        qcomplex want = F.embed(jj, spec.sigma_basis[1]);
        qcomplex have = emb[(jj + 1) % n];
        if (to_double((want - have).norm_sq()) > tol * tol)
            diags.push_back("embedding order does not follow sigma (position " +
                            std::to_string(jj) + ")");
    }

    if (!diags.empty()) {
        std::string s = "invalid config:";
        for (const auto &d : diags) s += "\n  " + d;
        throw config_error(s);
    }

    CyclicAlgebra A(std::move(F), spec.gamma, spec.units);

    // falsification scans: gamma must not be a relative norm of a small field
    // element, and no small nonzero element may have reduced norm 0; a proof
    // is out of scope, so probe and reject obviously broken instances
    {
        const NumberField &Fld = A.field();
        long reach = 2;
        long span = 2 * reach + 1;
        double total = std::pow(double(span), 2.0 * n);
        std::mt19937_64 rng(0x5eedULL);
        auto field_probe = [&](std::uint64_t idx) {
            FieldElement x(n);
            for (int k = 0; k < n; ++k) {
                long re = long(idx % span) - reach; idx /= span;
                long im = long(idx % span) - reach; idx /= span;
                x.c[k] = GaussianInt(re, im);
            }
            return x;
        };
        std::uint64_t budget = 20000;
        if (total <= double(budget)) {
            for (std::uint64_t idx = 0; idx < std::uint64_t(total); ++idx) {
                FieldElement x = field_probe(idx);
                if (x.is_zero()) continue;
                if (Fld.rel_norm(x) == spec.gamma) {
                    diags.push_back("gamma is the relative norm of " + [&] {
                        std::string s;
                        for (const auto &z : x.c) s += to_string(z) + " ";
                        return s;
                    }() + "; division property falsified");
                    break;
                }
            }
        } else {
            for (std::uint64_t t = 0; t < budget && diags.empty(); ++t) {
                FieldElement x = field_probe(rng() % std::uint64_t(total));
                if (x.is_zero()) continue;
                if (Fld.rel_norm(x) == spec.gamma) {
                    diags.push_back("gamma is a relative norm; division property falsified");
                    break;
                }
            }
        }
    }
    if (diags.empty()) {
        // reduced norms of small elements must be nonzero
        const int n2 = 2 * n * n;
        double total = std::pow(3.0, double(n2));
        std::mt19937_64 rng(0xabcdULL);
        auto probe = [&](std::uint64_t idx, bool random) {
            std::vector<std::int64_t> v(n2);
            for (int k = 0; k < n2; ++k) {
                if (random) v[k] = std::int64_t(rng() % 3) - 1;
                else { v[k] = std::int64_t(idx % 3) - 1; idx /= 3; }
            }
            return A.from_coords(v);
        };
        std::uint64_t budget = 20000;
        bool full = total <= double(budget);
        std::uint64_t count = full ? std::uint64_t(total) : budget;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            AlgebraElement x = probe(idx, !full);
            if (x.is_zero()) continue;
            if (A.nrd_norm(x) == 0) {
                diags.push_back("zero reduced norm on a nonzero element; not a division algebra");
                break;
            }
        }
    }

    if (!diags.empty()) {
        std::string s = "invalid config:";
        for (const auto &d : diags) s += "\n  " + d;
        throw config_error(s);
    }
    return A;
}

inline CyclicAlgebra load_algebra(const std::string &path, int precision_bits = 128) {
    return build_algebra(parse_config(path), precision_bits);
}

} // namespace cda
