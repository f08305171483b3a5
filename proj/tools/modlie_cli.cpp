// Command-line driver: construct algebras, sample elements, run reductions,
// count nilpotent points over F_q, and execute the verification suite.

#include <chrono>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "modlie/prng.hpp"
#include "modlie/verify.hpp"

using namespace modlie;
using nlohmann::json;

namespace {

struct SessionConfig {
    uint32_t p = 5;
    uint32_t M = 1;
    std::string family = "W";
    uint32_t m = 1;
    uint32_t n = 1;
    uint32_t t = 1;
    uint64_t seed = 20210905;
    std::string mode;
    std::string suite = "all";
    uint32_t workers = 1;
    std::string format = "text";
};

uint64_t pow_u64(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

void validate_family(const SessionConfig& cfg) {
    if (cfg.family == "sl2-semidirect" || cfg.family == "sl2-witt") {
        if (cfg.p <= 2) throw CLI::ValidationError("--p", "this family needs p > 2");
    }
    if (cfg.family == "Wp" || cfg.family == "zass-e") {
        if (cfg.p <= 3) throw CLI::ValidationError("--p", "this family needs p > 3");
        if (cfg.n < 2) throw CLI::ValidationError("--n", "this family needs n >= 2");
    }
}

int cmd_construct(const SessionConfig& cfg) {
    validate_family(cfg);
    json out;
    out["schema"] = 1;
    out["family"] = cfg.family;
    out["p"] = cfg.p;
    if (cfg.family == "W") {
        ShapePtr ctx = make_shape(cfg.m, std::vector<uint32_t>(cfg.m, cfg.n), ext_field_make(cfg.p, 1));
        uint64_t dim = cfg.m * ctx->dim();
        uint64_t expected = cfg.m * pow_u64(cfg.p, cfg.m * cfg.n);
        out["dim"] = dim;
        out["closed_form"] = expected;
        out["grading"] = {{"min", -1}, {"max", static_cast<int64_t>(cfg.m) * (pow_u64(cfg.p, cfg.n) - 1) - 1}};
        if (dim != expected) throw std::logic_error("dimension check failed");
    } else if (cfg.family == "Wp") {
        ShapePtr ctx = make_shape(1, {cfg.n}, ext_field_make(cfg.p, 1));
        uint64_t dim = ctx->dim() + cfg.n - 1;
        out["dim"] = dim;
        out["closed_form"] = pow_u64(cfg.p, cfg.n) + cfg.n - 1;
        if (dim != pow_u64(cfg.p, cfg.n) + cfg.n - 1) throw std::logic_error("dimension check failed");
    } else if (cfg.family == "zass-e") {
        ZassenhausEAlgebra z = ZassenhausEAlgebra::build(cfg.p, cfg.n, cfg.M);
        out["dim"] = z.lp_dim();
        out["closed_form"] = pow_u64(cfg.p, cfg.n) + cfg.n - 1;
        if (z.lp_dim() != pow_u64(cfg.p, cfg.n) + cfg.n - 1) throw std::logic_error("dimension check failed");
    } else if (cfg.family == "sl2-semidirect") {
        SemidirectAlgebra g = make_sl2_loop_algebra(cfg.p);
        out["dim"] = g.dim();
        out["closed_form"] = 3 * cfg.p + 1;
        if (g.dim() != 3u * cfg.p + 1) throw std::logic_error("dimension check failed");
    } else if (cfg.family == "sl2-witt") {
        SemidirectAlgebra g = make_sl2_witt_algebra(cfg.p, cfg.m);
        out["dim"] = g.dim();
        out["closed_form"] = 3 * pow_u64(cfg.p, cfg.m) + cfg.m * pow_u64(cfg.p, cfg.m);
    } else {
        std::cerr << "unknown family: " << cfg.family << "\n";
        return 2;
    }
    if (cfg.format == "json") {
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "family " << cfg.family << " p=" << cfg.p << " dim=" << out["dim"]
                  << " (closed form " << out["closed_form"] << ")\n";
    }
    return 0;
}

int cmd_count(const SessionConfig& cfg, uint64_t samples) {
    validate_family(cfg);
    const bool enumerate = cfg.mode.empty() || cfg.mode == "enumerate";
    json out;
    uint64_t total = 0, direct = 0, criterion = 0;
    bool conical = true;
    if (cfg.family == "W") {
        ShapePtr ctx = make_shape(cfg.m, std::vector<uint32_t>(cfg.m, 1), ext_field_make(cfg.p, 1));
        WittRealization W(ctx);
        const Fq& F = ctx->F();
        const size_t d = cfg.m * ctx->dim();
        auto test_both = [&](const Coords& a) {
            bool dn = W.algebra().is_nilpotent(a);
            PsiCoefficients psi = W.algebra().psi_relation(a, 0, cfg.m);
            bool pz = psi.found;
            for (const auto& c : psi.psi) pz &= F.is_zero(c);
            if (dn) ++direct;
            if (pz) ++criterion;
            ++total;
            if (dn) {
                // the nilpotent set is conical: every scaling stays nilpotent
                for (uint32_t c = 2; c < cfg.p && conical; ++c) {
                    Coords scaled = W.algebra().scale(a, F.from_int(c));
                    conical &= W.algebra().is_nilpotent(scaled);
                }
            }
        };
        if (enumerate) {
            uint64_t space = pow_u64(cfg.p, d);
            if (space > 10000000ull) {
                std::cerr << "enumeration guard exceeded (" << space << " points); use --mode sample\n";
                return 2;
            }
            // worker pool over index chunks; the per-chunk tallies are merged
            // in index order, so the report does not depend on the worker count
            uint32_t workers = std::max<uint32_t>(1, cfg.workers);
            std::vector<uint64_t> w_total(workers, 0), w_direct(workers, 0), w_crit(workers, 0);
            std::vector<uint8_t> w_conical(workers, 1);
            auto scan = [&](uint32_t w, uint64_t begin, uint64_t end) {
                for (uint64_t idx = begin; idx < end; ++idx) {
                    Coords a(d, F.zero());
                    uint64_t rest = idx;
                    for (size_t k = 0; k < d; ++k) {
                        a[k] = F.from_rank(rest % cfg.p);
                        rest /= cfg.p;
                    }
                    bool dn = W.algebra().is_nilpotent(a);
                    PsiCoefficients psi = W.algebra().psi_relation(a, 0, cfg.m);
                    bool pz = psi.found;
                    for (const auto& c : psi.psi) pz &= F.is_zero(c);
                    if (dn) ++w_direct[w];
                    if (pz) ++w_crit[w];
                    ++w_total[w];
                    if (dn) {
                        for (uint32_t c = 2; c < cfg.p && w_conical[w]; ++c) {
                            Coords scaled = W.algebra().scale(a, F.from_int(c));
                            w_conical[w] &= W.algebra().is_nilpotent(scaled) ? 1 : 0;
                        }
                    }
                }
            };
            if (workers == 1) {
                scan(0, 0, space);
            } else {
                std::vector<std::thread> pool;
                uint64_t chunk = (space + workers - 1) / workers;
                for (uint32_t w = 0; w < workers; ++w) {
                    uint64_t b = w * chunk, e = std::min(space, b + chunk);
                    if (b >= e) break;
                    pool.emplace_back(scan, w, b, e);
                }
                for (auto& th : pool) th.join();
            }
            for (uint32_t w = 0; w < workers; ++w) {
                total += w_total[w];
                direct += w_direct[w];
                criterion += w_crit[w];
                conical = conical && w_conical[w];
            }
        } else {
            Prng rng = Prng::substream(cfg.seed, 7001);
            for (uint64_t i = 0; i < samples; ++i) {
                Coords a(d, F.zero());
                for (auto& x : a) x = rng.field_element(F);
                test_both(a);
            }
        }
    } else if (cfg.family == "sl2-semidirect") {
        SemidirectAlgebra g = make_sl2_loop_algebra(cfg.p);
        const Fq& F = g.F();
        Prng rng = Prng::substream(cfg.seed, 7002);
        uint64_t todo = enumerate ? pow_u64(cfg.p, g.dim()) : samples;
        if (enumerate && todo > 10000000ull) {
            std::cerr << "enumeration guard exceeded; use --mode sample\n";
            return 2;
        }
        for (uint64_t i = 0; i < todo; ++i) {
            Coords a = g.rep().zero();
            if (enumerate) {
                uint64_t rest = i;
                for (auto& x : a) {
                    x = F.from_rank(rest % cfg.p);
                    rest /= cfg.p;
                }
            } else {
                for (auto& x : a) x = rng.field_element(F);
            }
            bool dn = g.rep().is_nilpotent(a);
            PsiCoefficients psi = g.rep().psi_relation(a, 1, 1);
            bool pz = psi.found && F.is_zero(psi.psi[0]);
            if (dn) ++direct;
            if (pz) ++criterion;
            ++total;
            if (dn) {
                for (uint32_t c = 2; c < cfg.p && conical; ++c) {
                    conical &= g.rep().is_nilpotent(g.rep().scale(a, F.from_int(c)));
                }
            }
        }
    } else if (cfg.family == "Wp") {
        // W(1;n)_p realized by p-closure; the envelope has a toral Cartan
        // subalgebra, so the psi relation starts at the zeroth power (e = 0)
        // with s = n.
        ShapePtr ctx = make_shape(1, {cfg.n}, ext_field_make(cfg.p, 1));
        std::vector<FqMatrix> gens;
        for (uint64_t r = 0; r < ctx->dim(); ++r) {
            gens.push_back(lp_operator(lp_from_poly(dp_monomial(ctx, r, ctx->F().one()))));
        }
        MatrixAlgebra alg = MatrixAlgebra::from_generators_p_closed(ctx->F(), gens);
        const Fq& F = ctx->F();
        if (enumerate) {
            std::cerr << "Wp enumeration exceeds the guard; use --mode sample\n";
            return 2;
        }
        Prng rng = Prng::substream(cfg.seed, 7006);
        for (uint64_t i = 0; i < samples; ++i) {
            Coords a = alg.zero();
            for (auto& x : a) x = rng.field_element(F);
            bool dn = alg.is_nilpotent(a);
            PsiCoefficients psi = alg.psi_relation(a, 0, cfg.n);
            bool pz = psi.found;
            for (const auto& c : psi.psi) pz &= F.is_zero(c);
            if (dn) ++direct;
            if (pz) ++criterion;
            ++total;
            if (dn) {
                for (uint32_t c = 2; c < cfg.p && conical; ++c) {
                    conical &= alg.is_nilpotent(alg.scale(a, F.from_int(c)));
                }
            }
        }
    } else {
        std::cerr << "count supports families W, Wp, and sl2-semidirect\n";
        return 2;
    }
    bool agree = direct == criterion;
    double logq = total && direct ? std::log(static_cast<double>(direct)) / std::log(static_cast<double>(cfg.p)) : 0.0;
    out = {{"schema", 1},          {"total", total},           {"nilpotent", direct},
           {"criterion", criterion}, {"agree", agree},         {"conical", conical},
           {"family", cfg.family},   {"p", cfg.p},             {"log_p_estimate", logq}};
    if (cfg.format == "json") {
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "scanned " << total << " points: nilpotent " << direct << ", criterion " << criterion
                  << (agree ? " (agree)" : " (DISAGREE)") << (conical ? ", conical" : ", NOT CONICAL")
                  << ", log_p size estimate " << logq << "\n";
    }
    return agree && conical ? 0 : 1;
}

int cmd_reduce(const SessionConfig& cfg, const std::string& element) {
    validate_family(cfg);
    std::string which = cfg.mode;
    json out;
    out["schema"] = 1;
    out["which"] = which;
    bool roundtrip = false;
    std::string chain_text, form_text;
    if (which == "demushkin" || which == "premet") {
        ShapePtr ctx = make_shape(cfg.m, std::vector<uint32_t>(cfg.m, 1), ext_field_make(cfg.p, 1));
        DerivationElement z = deriv_parse(ctx, element);
        if (which == "demushkin") {
            DemushkinResult r = demushkin_reduce(z);
            roundtrip = apply_chain_truncated(ctx, r.chain, z) == r.form;
            chain_text = chain_to_string(r.chain, ctx->F());
            form_text = deriv_to_string(r.form);
        } else {
            PremetResult r = premet_regular_reduce(z);
            if (!r.regular) {
                out["class"] = "singular";
                out["witness"] = deriv_to_string(r.witness_power);
                if (cfg.format == "json") {
                    std::cout << out.dump() << "\n";
                } else {
                    std::cout << "singular: witness power lies in W_(0)\n" << out["witness"] << "\n";
                }
                return 1;
            }
            roundtrip = apply_chain_truncated(ctx, r.chain, z) == r.form;
            chain_text = chain_to_string(r.chain, ctx->F());
            form_text = deriv_to_string(r.form);
        }
    } else if (which == "yao-shu" || which == "tyurin") {
        ShapePtr ctx = make_shape(1, {cfg.n}, ext_field_make(cfg.p, 1));
        PEnvelopeElement D = lp_parse(ctx, element);
        if (which == "yao-shu") {
            YaoShuResult r = yao_shu_reduce(D);
            roundtrip = apply_admissible_chain(r.chain, D) == r.form;
            chain_text = chain_to_string(r.chain.as_auto_chain(), ctx->F());
            form_text = lp_to_string(r.form);
        } else {
            TyurinResult r = tyurin_reduce(D, cfg.t);
            roundtrip = apply_admissible_chain(r.chain, D) == r.form;
            chain_text = chain_to_string(r.chain.as_auto_chain(), ctx->F());
            form_text = lp_to_string(r.form);
        }
    } else if (which == "semidirect") {
        SemidirectAlgebra L = cfg.m == 1 ? make_sl2_loop_algebra(cfg.p)
                                         : make_sl2_witt_algebra(cfg.p, cfg.m);
        SemiElement A = L.parse(element);
        auto r = L.semi_reduce(A);
        roundtrip = L.equal(L.apply_reduce_steps(r.steps, A), r.form);
        std::ostringstream chain;
        for (size_t i = 0; i < r.steps.size(); ++i) {
            if (i) chain << "\n";
            std::ostringstream sv;
            for (size_t k = 0; k < r.steps[i].s.size(); ++k) {
                if (k) sv << ",";
                sv << L.F().to_string(r.steps[i].s[k]);
            }
            chain << "expad(tensor{" << sv.str() << "};f=" << dp_to_string(r.steps[i].f) << ")";
        }
        chain_text = chain.str();
        form_text = L.to_string(r.form);
    } else {
        std::cerr << "--mode must be one of demushkin|premet|yao-shu|tyurin|semidirect\n";
        return 2;
    }
    out["chain"] = chain_text;
    out["form"] = form_text;
    out["roundtrip"] = roundtrip;
    if (cfg.format == "json") {
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "chain:\n" << chain_text << "\nform: " << form_text << "\nroundtrip: "
                  << (roundtrip ? "exact" : "MISMATCH") << "\n";
    }
    return roundtrip ? 0 : 1;
}

int cmd_sample(const SessionConfig& cfg, uint64_t count) {
    validate_family(cfg);
    const std::string constraint = cfg.mode.empty() ? "any" : cfg.mode;
    const uint64_t budget = 200000;
    json items = json::array();
    if (cfg.family == "Wp") {
        ShapePtr ctx = make_shape(1, {cfg.n}, ext_field_make(cfg.p, 1));
        const Fq& F = ctx->F();
        Prng rng = Prng::substream(cfg.seed, 7003);
        uint64_t emitted = 0, tries = 0;
        while (emitted < count && tries < budget) {
            ++tries;
            PEnvelopeElement D = lp_zero(ctx);
            for (uint64_t r = 0; r < ctx->dim(); ++r) D.poly.set_coeff(r, rng.field_element(F));
            for (auto& t : D.tails) t = rng.field_element(F);
            bool nil = lp_is_nilpotent(D);
            if (constraint == "nilpotent" && !nil) continue;
            if (constraint == "regular-nilpotent" || constraint == "singular-nilpotent") {
                if (!nil) continue;
                NilpotentClass cls = classify_nilpotent(D);
                if (constraint == "regular-nilpotent" && !cls.regular) continue;
                if (constraint == "singular-nilpotent" && cls.regular) continue;
            }
            std::string s = lp_to_string(D);
            if (!(lp_parse(ctx, s) == D)) throw std::logic_error("serialization round trip failed");
            items.push_back(s);
            ++emitted;
        }
        if (emitted < count) {
            std::cerr << "constraint unsatisfiable within retry budget (emitted " << emitted << ")\n";
            return 1;
        }
    } else if (cfg.family == "sl2-semidirect") {
        SemidirectAlgebra g = make_sl2_loop_algebra(cfg.p);
        const Fq& F = g.F();
        Prng rng = Prng::substream(cfg.seed, 7004);
        uint64_t emitted = 0, tries = 0;
        while (emitted < count && tries < budget) {
            ++tries;
            Coords a = g.rep().zero();
            for (auto& x : a) x = rng.field_element(F);
            SemiElement A = g.element_of(a);
            auto verdict = g.is_nilpotent(A);
            if (constraint == "nilpotent" && !verdict.direct) continue;
            std::string s = g.to_string(A);
            if (!g.equal(g.parse(s), A)) throw std::logic_error("serialization round trip failed");
            items.push_back(s);
            ++emitted;
        }
        if (emitted < count) {
            std::cerr << "constraint unsatisfiable within retry budget\n";
            return 1;
        }
    } else if (cfg.family == "W") {
        ShapePtr ctx = make_shape(cfg.m, std::vector<uint32_t>(cfg.m, 1), ext_field_make(cfg.p, 1));
        WittRealization W(ctx);
        const Fq& F = ctx->F();
        Prng rng = Prng::substream(cfg.seed, 7005);
        uint64_t emitted = 0, tries = 0;
        while (emitted < count && tries < budget) {
            ++tries;
            DerivationElement D(ctx);
            for (uint32_t i = 0; i < cfg.m; ++i) {
                for (uint64_t r = 0; r < ctx->dim(); ++r) D.part(i).set_coeff(r, rng.field_element(F));
            }
            if (constraint == "nilpotent" && !W.is_nilpotent(D)) continue;
            std::string s = deriv_to_string(D);
            if (!(deriv_parse(ctx, s) == D)) throw std::logic_error("serialization round trip failed");
            items.push_back(s);
            ++emitted;
        }
        if (emitted < count) {
            std::cerr << "constraint unsatisfiable within retry budget\n";
            return 1;
        }
    } else {
        std::cerr << "sample supports families W, Wp, sl2-semidirect\n";
        return 2;
    }
    if (cfg.format == "json") {
        std::cout << json{{"schema", 1}, {"constraint", constraint}, {"elements", items}}.dump() << "\n";
    } else {
        for (const auto& s : items) std::cout << s.get<std::string>() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact workbench for restricted Lie algebras of Cartan type over F_p"};
    app.require_subcommand(1);
    app.fallthrough();
    SessionConfig cfg;
    if (const char* env = std::getenv("MODLIE_WORKERS")) {
        cfg.workers = static_cast<uint32_t>(std::strtoul(env, nullptr, 10));
        if (cfg.workers == 0) cfg.workers = 1;
    }
    app.add_option("--p", cfg.p, "prime modulus");
    app.add_option("--M", cfg.M, "field extension degree");
    app.add_option("--family", cfg.family, "W | Wp | zass-e | sl2-semidirect | sl2-witt");
    app.add_option("--m", cfg.m, "number of variables");
    app.add_option("--n", cfg.n, "height parameter");
    app.add_option("--t", cfg.t, "tail exponent for the tail-led reduction");
    app.add_option("--seed", cfg.seed, "PRNG seed");
    app.add_option("--mode", cfg.mode, "command-specific mode");
    app.add_option("--suite", cfg.suite, "verification suite");
    app.add_option("--workers", cfg.workers, "worker count for enumeration");
    app.add_option("--format", cfg.format, "text | json");

    auto* construct = app.add_subcommand("construct", "build an algebra and report its dimensions");
    auto* count = app.add_subcommand("count", "count nilpotent points by two independent routes");
    uint64_t samples = 2000;
    count->add_option("--samples", samples, "sample count for --mode sample");
    auto* reduce = app.add_subcommand("reduce", "run a normal-form reduction on a serialized element");
    std::string element;
    reduce->add_option("element", element, "serialized element")->required();
    auto* sample = app.add_subcommand("sample", "emit seeded random elements under a constraint");
    uint64_t n_samples = 5;
    sample->add_option("--count", n_samples, "number of elements to emit");
    auto* verify = app.add_subcommand("verify", "run the verification ledger");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (construct->parsed()) return cmd_construct(cfg);
        if (count->parsed()) return cmd_count(cfg, samples);
        if (reduce->parsed()) return cmd_reduce(cfg, element);
        if (sample->parsed()) return cmd_sample(cfg, n_samples);
        if (verify->parsed()) {
            VerifyConfig vc{cfg.seed, cfg.workers};
            VerifySummary s = run_verify(vc, cfg.suite, std::cout, cfg.format == "json");
            return s.failed == 0 ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
