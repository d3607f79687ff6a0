#include "rect/cz.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace rect {

namespace {

// nu atoms resolved onto mu support ids: net signed weight and |nu| per point.
struct AtomLayout {
    std::vector<double> net;   // signed nu weight per mu point
    std::vector<double> abs_;  // |nu| per mu point
    std::vector<uint32_t> atom_ids;  // mu ids carrying nu mass, ascending
};

AtomLayout resolve_atoms(const SignedMeasure& nu, const DiscreteMeasure& mu) {
    std::map<std::vector<double>, uint32_t> where;
    for (size_t i = 0; i < mu.size(); ++i) {
        const Point p = mu.point(i);
        where.emplace(std::vector<double>(p.begin(), p.end()), static_cast<uint32_t>(i));
    }
    AtomLayout lay;
    lay.net.assign(mu.size(), 0.0);
    lay.abs_.assign(mu.size(), 0.0);
    auto place = [&](const DiscreteMeasure& part, double sign) {
        for (size_t i = 0; i < part.size(); ++i) {
            const Point p = part.point(i);
            const auto it = where.find(std::vector<double>(p.begin(), p.end()));
            if (it == where.end())
                throw ValidationError("cz_decompose: nu atom off the mu support");
            lay.net[it->second] += sign * part.weight(i);
            lay.abs_[it->second] += part.weight(i);
        }
    };
    place(nu.pos, 1.0);
    place(nu.neg, -1.0);
    for (size_t i = 0; i < mu.size(); ++i) {
        if (lay.abs_[i] > 0.0) {
            if (!(mu.weight(i) > 0.0))
                throw ValidationError("cz_decompose: nu atom on a zero-weight mu point");
            lay.atom_ids.push_back(static_cast<uint32_t>(i));
        }
    }
    return lay;
}

}  // namespace

CZDecomposition cz_decompose(const SignedMeasure& nu, const DiscreteMeasure& mu, double lambda,
                             const CzParams& params) {
    const int d = mu.dim();
    const double tv = nu.total_variation();
    const double bound = std::exp2(d + 1) * tv / mu.total_mass();
    if (!(lambda > bound))
        throw ValidationError("cz_decompose: lambda = " + fmt17(lambda) +
                              " not above the hypothesis bound 2^{d+1}||nu||/||mu|| = " +
                              fmt17(bound));

    AtomLayout lay = resolve_atoms(nu, mu);
    CZDecomposition dec;
    dec.lambda = lambda;
    dec.nu_weight = lay.net;

    // index over the nu atoms for cube-concentration queries
    std::vector<double> apts, aabs;
    for (uint32_t id : lay.atom_ids) {
        const Point p = mu.point(id);
        apts.insert(apts.end(), p.begin(), p.end());
        aabs.push_back(lay.abs_[id]);
    }
    BallQueryIndex aidx(apts, aabs, d);

    const double thr = std::exp2(-d - 1) * lambda;
    auto concentration_high = [&](const TrueCube& c) {
        // (5.1)-style predicate at this cube
        return aidx.box_mass(c.box()) > thr * mu.box_mass(c.box(2.0));
    };
    auto eta_clean = [&](const TrueCube& c) {
        for (double eta : params.eta_set) {
            if (aidx.box_mass(c.box(eta)) > thr * mu.box_mass(c.box(2.0 * eta))) return false;
        }
        return true;
    };

    // candidate cube per heavy atom
    const double diam = mu.diameter();
    const int j_lo = static_cast<int>(std::floor(std::log2(std::max(mu.resolution() * 0.5,
                                                                    1e-300))));
    const int j_hi = static_cast<int>(std::ceil(std::log2(std::max(4.0 * diam, 1.0)))) + 1;
    std::vector<TrueCube> candidates;
    for (uint32_t id : lay.atom_ids) {
        if (!(std::abs(lay.net[id]) > lambda * mu.weight(id))) continue;
        const Point p = mu.point(id);
        TrueCube probe;
        probe.center.assign(p.begin(), p.end());
        TrueCube chosen;
        bool found = false;
        TrueCube largest;
        bool have_largest = false;
        for (int j = j_lo; j <= j_hi; ++j) {
            probe.side = std::exp2(j);
            if (!concentration_high(probe)) continue;
            largest = probe;
            have_largest = true;
            if (!found && eta_clean(probe)) {
                chosen = probe;
                found = true;
            }
        }
        if (!found) {
            // push the largest (5.1)-cube up through failing dilations; an
            // eta failure is precisely (5.1) for the dilated cube
            if (!have_largest) continue;
            chosen = largest;
            for (int guard = 0; guard < 256 && !eta_clean(chosen); ++guard) {
                for (double eta : params.eta_set) {
                    TrueCube big = chosen;
                    big.side = chosen.side * eta;
                    if (aidx.box_mass(big.box()) > thr * mu.box_mass(big.box(2.0))) {
                        chosen = big;
                        break;
                    }
                }
            }
        }
        candidates.push_back(chosen);
    }

    // greedy selection, largest first; drop cubes whose center already lies in
    // a selected cube so every heavy atom stays covered by the union
    std::sort(candidates.begin(), candidates.end(), [](const TrueCube& a, const TrueCube& b) {
        if (a.side != b.side) return a.side > b.side;
        return a.center < b.center;
    });
    for (const TrueCube& c : candidates) {
        bool covered = false;
        for (const TrueCube& s : dec.cubes) {
            if (s.contains(c.center)) {
                covered = true;
                break;
            }
        }
        if (!covered) dec.cubes.push_back(c);
    }

    // per-point overlap and good density
    const size_t N = mu.size();
    dec.overlap.assign(N, 0);
    for (const TrueCube& c : dec.cubes)
        for (uint32_t id : mu.box_points(c.box())) ++dec.overlap[id];
    dec.f_good.assign(N, 0.0);
    for (size_t i = 0; i < N; ++i) {
        if (dec.overlap[i] == 0 && mu.weight(i) > 0.0)
            dec.f_good[i] = lay.net[i] / mu.weight(i);
    }

    // bad pieces: b_j constant on R_j cap supp(mu), normalized so that
    // int b_j dmu = int w_j dnu exactly
    dec.g_weight = dec.f_good;
    const size_t J = dec.cubes.size();
    dec.wj_nu_integral.resize(J);
    dec.bj_value.resize(J);
    dec.mu_Rj.resize(J);
    dec.nu_abs_Qj.resize(J);
    dec.Rj_support.resize(J);
    for (size_t j = 0; j < J; ++j) {
        const TrueCube& c = dec.cubes[j];
        double snu = 0.0;
        for (uint32_t id : mu.box_points(c.box())) {
            if (lay.abs_[id] > 0.0) snu += lay.net[id] / dec.overlap[id];
        }
        dec.wj_nu_integral[j] = snu;
        dec.nu_abs_Qj[j] = aidx.box_mass(c.box());
        dec.Rj_support[j] = mu.box_points(c.box(6.0));
        double mR = 0.0;
        for (uint32_t id : dec.Rj_support[j]) mR += mu.weight(id);
        dec.mu_Rj[j] = mR;
        dec.bj_value[j] = mR > 0.0 ? snu / mR : 0.0;
        for (uint32_t id : dec.Rj_support[j]) dec.g_weight[id] += dec.bj_value[j];
    }
    return dec;
}

AuditReport cz_audit(const CZDecomposition& dec, const SignedMeasure& nu,
                     const DiscreteMeasure& mu, const CzParams& params) {
    AuditReport rep;
    const int d = mu.dim();
    const double thr = std::exp2(-d - 1) * dec.lambda;
    const size_t J = dec.cubes.size();
    const double cap = 100.0;  // finiteness threshold for the reported constants

    AtomLayout lay;
    try {
        lay = resolve_atoms(nu, mu);
    } catch (const ValidationError& e) {
        rep.clauses.push_back({"atoms", false, 0.0, e.what()});
        rep.all_pass = false;
        return rep;
    }
    std::vector<double> apts, aabs;
    for (uint32_t id : lay.atom_ids) {
        const Point p = mu.point(id);
        apts.insert(apts.end(), p.begin(), p.end());
        aabs.push_back(lay.abs_[id]);
    }
    BallQueryIndex aidx(apts, aabs, d);

    auto push = [&](AuditClause c) {
        rep.all_pass = rep.all_pass && c.pass;
        rep.clauses.push_back(std::move(c));
    };

    {  // (5.1): |nu|(Q_j) > 2^{-d-1} lambda mu(2Q_j)
        AuditClause c{"5.1", true, std::numeric_limits<double>::infinity(), ""};
        for (size_t j = 0; j < J; ++j) {
            const double rhs = thr * mu.box_mass(dec.cubes[j].box(2.0));
            const double ratio = rhs > 0.0 ? dec.nu_abs_Qj[j] / rhs
                                           : std::numeric_limits<double>::infinity();
            if (ratio < c.constant) {
                c.constant = ratio;
                c.witness = "cube " + std::to_string(j);
            }
            if (!(dec.nu_abs_Qj[j] > rhs)) c.pass = false;
        }
        if (J == 0) c.constant = 0.0;
        push(c);
    }
    {  // (5.2): |nu|(eta Q_j) <= 2^{-d-1} lambda mu(2 eta Q_j) on the eta set
        AuditClause c{"5.2", true, 0.0, ""};
        for (size_t j = 0; j < J; ++j) {
            for (double eta : params.eta_set) {
                const double lhs = aidx.box_mass(dec.cubes[j].box(eta));
                const double rhs = thr * mu.box_mass(dec.cubes[j].box(2.0 * eta));
                const double ratio = rhs > 0.0 ? lhs / rhs
                                               : (lhs > 0.0 ? std::numeric_limits<double>::infinity()
                                                            : 0.0);
                if (ratio > c.constant) {
                    c.constant = ratio;
                    c.witness = "cube " + std::to_string(j) + ", eta " + fmt17(eta);
                }
                if (lhs > rhs) c.pass = false;
            }
        }
        push(c);
    }
    {  // (5.3): nu = f mu outside the union with |f| <= lambda
        AuditClause c{"5.3", true, 0.0, ""};
        for (size_t i = 0; i < mu.size(); ++i) {
            if (dec.overlap[i] > 0) continue;
            if (lay.abs_[i] > 0.0 && !(mu.weight(i) > 0.0)) {
                c.pass = false;
                c.witness = "nu atom on zero-weight point " + std::to_string(i);
                continue;
            }
            const double f = mu.weight(i) > 0.0 ? std::abs(lay.net[i]) / mu.weight(i) : 0.0;
            if (f / dec.lambda > c.constant) {
                c.constant = f / dec.lambda;
                c.witness = "point " + std::to_string(i);
            }
            if (f > dec.lambda * (1.0 + params.rel_tol)) c.pass = false;
        }
        push(c);
    }
    {  // (5.4): int b_j dmu = int w_j dnu
        AuditClause c{"5.4", true, 0.0, ""};
        for (size_t j = 0; j < J; ++j) {
            double int_b = 0.0;
            for (uint32_t id : dec.Rj_support[j]) int_b += dec.bj_value[j] * mu.weight(id);
            const double target = dec.wj_nu_integral[j];
            const double err = std::abs(int_b - target) / std::max(1.0, std::abs(target));
            if (err > c.constant) {
                c.constant = err;
                c.witness = "cube " + std::to_string(j);
            }
            if (err > params.rel_tol) c.pass = false;
        }
        push(c);
    }
    {  // (5.5): ||b_j||_inf mu(R_j) <= c |nu|(Q_j)
        AuditClause c{"5.5", true, 0.0, ""};
        for (size_t j = 0; j < J; ++j) {
            const double lhs = std::abs(dec.bj_value[j]) * dec.mu_Rj[j];
            const double ratio = dec.nu_abs_Qj[j] > 0.0
                                     ? lhs / dec.nu_abs_Qj[j]
                                     : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            if (ratio > c.constant) {
                c.constant = ratio;
                c.witness = "cube " + std::to_string(j);
            }
        }
        c.pass = c.constant <= cap;
        push(c);
    }
    {  // (5.6): sum_j |b_j| <= c lambda pointwise
        AuditClause c{"5.6", true, 0.0, ""};
        std::vector<double> acc(mu.size(), 0.0);
        for (size_t j = 0; j < J; ++j)
            for (uint32_t id : dec.Rj_support[j]) acc[id] += std::abs(dec.bj_value[j]);
        for (size_t i = 0; i < mu.size(); ++i) {
            if (acc[i] / dec.lambda > c.constant) {
                c.constant = acc[i] / dec.lambda;
                c.witness = "point " + std::to_string(i);
            }
        }
        c.pass = c.constant <= cap;
        push(c);
    }
    {  // bounded overlap of the Q_j
        AuditClause c{"overlap", true, 0.0, ""};
        for (size_t i = 0; i < mu.size(); ++i) {
            if (dec.overlap[i] > c.constant) {
                c.constant = dec.overlap[i];
                c.witness = "point " + std::to_string(i);
            }
        }
        c.pass = c.constant <= cap;
        push(c);
    }
    {  // beta_j(R_j) = 0
        AuditClause c{"beta_zero_mean", true, 0.0, ""};
        for (size_t j = 0; j < J; ++j) {
            double beta = 0.0;
            for (uint32_t id : dec.Rj_support[j]) {
                if (lay.abs_[id] > 0.0 && dec.cubes[j].contains(mu.point(id)))
                    beta += lay.net[id] / dec.overlap[id];
                beta -= dec.bj_value[j] * mu.weight(id);
            }
            const double scale = std::max(1.0, std::abs(dec.wj_nu_integral[j]));
            if (std::abs(beta) / scale > c.constant) {
                c.constant = std::abs(beta) / scale;
                c.witness = "cube " + std::to_string(j);
            }
            if (std::abs(beta) / scale > params.rel_tol) c.pass = false;
        }
        push(c);
    }
    {  // decomposition identity nu = g mu + sum_j beta_j, atom-wise
        AuditClause c{"identity", true, 0.0, ""};
        std::vector<double> recon(mu.size(), 0.0);
        for (size_t i = 0; i < mu.size(); ++i) recon[i] = dec.g_weight[i] * mu.weight(i);
        for (size_t j = 0; j < J; ++j) {
            for (uint32_t id : dec.Rj_support[j]) {
                double beta_w = -dec.bj_value[j] * mu.weight(id);
                if (lay.abs_[id] > 0.0 && dec.cubes[j].contains(mu.point(id)))
                    beta_w += lay.net[id] / dec.overlap[id];
                recon[id] += beta_w;
            }
        }
        const double scale = std::max(1.0, nu.total_variation());
        for (size_t i = 0; i < mu.size(); ++i) {
            const double err = std::abs(recon[i] - lay.net[i]) / scale;
            if (err > c.constant) {
                c.constant = err;
                c.witness = "point " + std::to_string(i);
            }
            if (err > params.rel_tol) c.pass = false;
        }
        push(c);
    }
    {  // ||g||_inf <= c lambda
        AuditClause c{"g_inf", true, 0.0, ""};
        for (size_t i = 0; i < mu.size(); ++i) {
            const double g = std::abs(dec.g_weight[i]);
            if (g / dec.lambda > c.constant) {
                c.constant = g / dec.lambda;
                c.witness = "point " + std::to_string(i);
            }
        }
        c.pass = c.constant <= cap;
        push(c);
    }
    return rep;
}

std::string AuditReport::to_json() const {
    nlohmann::ordered_json j;
    j["all_pass"] = all_pass;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : clauses) {
        arr.push_back({{"clause", c.id},
                       {"pass", c.pass},
                       {"constant", c.constant},
                       {"witness", c.witness}});
    }
    j["clauses"] = arr;
    return j.dump(2);
}

}  // namespace rect
