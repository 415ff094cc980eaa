#include "pwinterp/io.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

namespace pwinterp {

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> keys,
                  bool operator_scope) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            const std::string msg = "unknown key \"" + it.key() + "\"";
            if (operator_scope) throw UnknownOperatorError(msg);
            throw FormatError(msg);
        }
    }
}

double get_real(const json& obj, const char* key, bool operator_scope) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        const std::string msg =
            std::string("missing or non-numeric \"") + key + "\"";
        if (operator_scope) throw UnknownOperatorError(msg);
        throw FormatError(msg);
    }
    return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, bool operator_scope) {
    if (!obj.contains(key) || !obj[key].is_number_integer()) {
        const std::string msg =
            std::string("missing or non-integer \"") + key + "\"";
        if (operator_scope) throw UnknownOperatorError(msg);
        throw FormatError(msg);
    }
    return obj[key].get<int>();
}

Complex parse_complex_pair(const json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number())
        throw UnknownOperatorError("complex values must be [re, im] pairs");
    return Complex(v[0].get<double>(), v[1].get<double>());
}

MultiplierSpec parse_operator(const json& op) {
    if (!op.is_object() || !op.contains("type") || !op["type"].is_string())
        throw FormatError("operator entries must be objects with a \"type\"");
    const std::string type = op["type"].get<std::string>();

    if (type == "identity") {
        require_keys(op, {"type"}, true);
        return MultiplierSpec::identity();
    }
    if (type == "shift") {
        require_keys(op, {"type", "a"}, true);
        return MultiplierSpec::shift_by(get_real(op, "a", true));
    }
    if (type == "derivative") {
        require_keys(op, {"type", "order", "shift"}, true);
        return MultiplierSpec::derivative(get_int(op, "order", true),
                                          get_real(op, "shift", true));
    }
    if (type == "diffquot") {
        require_keys(op, {"type", "epsilon", "shift"}, true);
        return MultiplierSpec::diff_quotient(get_real(op, "epsilon", true),
                                             get_real(op, "shift", true));
    }
    if (type == "poly") {
        require_keys(op, {"type", "coeffs", "shift"}, true);
        if (!op.contains("coeffs") || !op["coeffs"].is_array() ||
            op["coeffs"].empty())
            throw UnknownOperatorError("poly needs a nonempty \"coeffs\" array");
        std::vector<Complex> coeffs;
        for (const auto& c : op["coeffs"]) coeffs.push_back(parse_complex_pair(c));
        return MultiplierSpec::polynomial(std::move(coeffs),
                                          get_real(op, "shift", true));
    }
    if (type == "power") {
        require_keys(op, {"type", "base", "k"}, true);
        if (!op.contains("base"))
            throw UnknownOperatorError("power needs a \"base\" operator");
        const int k = get_int(op, "k", true);
        if (k < 1) throw UnknownOperatorError("power needs k >= 1");
        return parse_operator(op["base"]).pow(k);
    }
    throw UnknownOperatorError("unknown operator type \"" + type + "\"");
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_real(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

OperatorFamily parse_family_json(const std::string& text) {
    const json j = parse_text(text);
    if (!j.is_object()) throw FormatError("family file must be a JSON object");
    require_keys(j, {"N", "rho", "delta", "operators"}, false);

    const int N = get_int(j, "N", false);
    if (N < 1) throw FormatError("N must be >= 1");
    if (!j.contains("operators") || !j["operators"].is_array())
        throw FormatError("missing \"operators\" array");
    if (static_cast<int>(j["operators"].size()) != N)
        throw FormatError("\"operators\" must contain exactly N entries");

    std::vector<MultiplierSpec> members;
    members.reserve(N);
    for (const auto& op : j["operators"]) members.push_back(parse_operator(op));

    std::optional<double> rho, delta;
    if (j.contains("rho")) {
        rho = get_real(j, "rho", false);
        if (*rho <= 0.0) throw FormatError("rho must be positive");
    }
    if (j.contains("delta")) {
        delta = get_real(j, "delta", false);
        if (*delta <= 0.0) throw FormatError("delta must be positive");
    }
    return OperatorFamily(std::move(members), rho, delta);
}

OperatorFamily load_family(const std::string& path) {
    return parse_family_json(slurp(path));
}

BandlimitedSignal parse_signal_json(const std::string& text) {
    const json j = parse_text(text);
    if (!j.is_object()) throw FormatError("signal file must be a JSON object");
    require_keys(j, {"terms"}, false);
    if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
        throw FormatError("signal needs a nonempty \"terms\" array");

    BandlimitedSignal f;
    for (const auto& t : j["terms"]) {
        if (!t.is_object()) throw FormatError("terms must be objects");
        require_keys(t, {"c", "x0"}, false);
        if (!t.contains("c") || !t.contains("x0") || !t["x0"].is_number())
            throw FormatError("each term needs \"c\": [re, im] and \"x0\"");
        const auto& c = t["c"];
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() ||
            !c[1].is_number())
            throw FormatError("\"c\" must be a [re, im] pair");
        f.terms.push_back({Complex(c[0].get<double>(), c[1].get<double>()),
                           t["x0"].get<double>()});
    }
    return f;
}

BandlimitedSignal load_signal(const std::string& path) {
    return parse_signal_json(slurp(path));
}

namespace {

// Serializes a power-1 multiplier into the operator schema. Members whose
// sinc factors do not match the difference-quotient shape have no file
// representation.
json operator_base_to_json(const MultiplierSpec& m) {
    json op;
    if (m.sinc_factors.empty()) {
        if (m.is_identity()) {
            op["type"] = "identity";
            return op;
        }
        if (m.poly_coeffs.size() == 1 &&
            m.poly_coeffs[0] == Complex(1.0, 0.0)) {
            op["type"] = "shift";
            op["a"] = m.shift;
            return op;
        }
        int degree = -1;
        bool monomial_one = true;
        for (std::size_t j = 0; j < m.poly_coeffs.size(); ++j) {
            if (m.poly_coeffs[j] == Complex(0.0, 0.0)) continue;
            if (degree >= 0 || m.poly_coeffs[j] != Complex(1.0, 0.0))
                monomial_one = false;
            degree = static_cast<int>(j);
        }
        if (monomial_one && degree >= 1) {
            op["type"] = "derivative";
            op["order"] = degree;
            op["shift"] = m.shift;
            return op;
        }
        op["type"] = "poly";
        json coeffs = json::array();
        for (const auto& c : m.poly_coeffs)
            coeffs.push_back({c.real(), c.imag()});
        op["coeffs"] = coeffs;
        op["shift"] = m.shift;
        return op;
    }
    if (m.sinc_factors.size() == 1 && m.poly_coeffs.size() == 2 &&
        m.poly_coeffs[0] == Complex(0.0, 0.0) &&
        m.poly_coeffs[1] == Complex(1.0, 0.0)) {
        op["type"] = "diffquot";
        op["epsilon"] = m.sinc_factors[0];
        op["shift"] = m.shift;
        return op;
    }
    throw FormatError(
        "multiplier has no representation in the family file schema");
}

}  // namespace

std::string family_to_json(const OperatorFamily& family) {
    json ops = json::array();
    for (const auto& m : family.members) {
        if (m.is_tabulated())
            throw FormatError(
                "tabulated multipliers have no file representation");
        MultiplierSpec base = m;
        base.power = 1;
        json op = operator_base_to_json(base);
        if (m.power != 1) {
            json p;
            p["type"] = "power";
            p["base"] = op;
            p["k"] = m.power;
            op = p;
        }
        ops.push_back(op);
    }
    json j;
    j["N"] = family.size();
    j["rho"] = family.rho;
    j["delta"] = family.delta;
    j["operators"] = ops;
    return j.dump(2);
}

const char* criterion_case_name(CriterionCase c) {
    switch (c) {
        case CriterionCase::PositiveEssInf:
            return "positive_essinf";
        case CriterionCase::NullZeroSet:
            return "null_zero_set";
        case CriterionCase::PositiveMeasureZeroSet:
            return "positive_measure_zero_set";
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::yes:
            return "yes";
        case Verdict::no:
            return "no";
        case Verdict::unknown:
            return "unknown";
    }
    return "?";
}

int criterion_case_exit_code(CriterionCase c) {
    switch (c) {
        case CriterionCase::PositiveEssInf:
            return 0;
        case CriterionCase::NullZeroSet:
            return 2;
        case CriterionCase::PositiveMeasureZeroSet:
            return 3;
    }
    return 1;
}

std::string criterion_report_json(const CriterionReport& report) {
    json j;
    j["case"] = criterion_case_name(report.criterion_case);
    j["essinf_estimate"] = report.essinf_estimate;
    j["zero_fraction"] = report.zero_fraction;
    j["min_location"] = report.min_location;
    return j.dump(2);
}

std::string sampling_verdict_json(const SamplingVerdict& verdict) {
    json j;
    j["stable_sampling"] = verdict_name(verdict.stable_sampling);
    j["interpolation_set"] = verdict_name(verdict.interpolation_set);
    j["case"] = criterion_case_name(verdict.report.criterion_case);
    j["essinf_estimate"] = verdict.report.essinf_estimate;
    j["zero_fraction"] = verdict.report.zero_fraction;
    j["min_location"] = verdict.report.min_location;
    return j.dump(2);
}

std::string frame_report_json(const FrameReport& report) {
    json j;
    j["ratio"] = report.ratio;
    j["tail_fraction"] = report.tail_fraction;
    j["M"] = report.M;
    return j.dump(2);
}

void write_det_profile_csv(std::ostream& os, const MatrixField& field) {
    os << "x,re_det,im_det,abs_det,cond\n";
    for (std::size_t i = 0; i < field.grid.size(); ++i) {
        print_real(os, field.grid[i]);
        os << ',';
        print_real(os, field.dets[i].real());
        os << ',';
        print_real(os, field.dets[i].imag());
        os << ',';
        print_real(os, std::abs(field.dets[i]));
        os << ',';
        print_real(os, field.conds[i]);
        os << '\n';
    }
}

void write_spectra_csv(std::ostream& os, const SpectralKernelSet& kset) {
    os << "piece,xi";
    for (int n = 1; n <= kset.N; ++n)
        os << ",re_g" << n << ",im_g" << n;
    os << '\n';
    for (int p = 0; p < kset.N; ++p) {
        for (int q = 0; q < kset.grid.nodes_per_piece; ++q) {
            os << (p + 1) << ',';
            print_real(os, kset.grid.xi[p][q]);
            for (int n = 1; n <= kset.N; ++n) {
                os << ',';
                print_real(os, kset.values[n - 1][p][q].real());
                os << ',';
                print_real(os, kset.values[n - 1][p][q].imag());
            }
            os << '\n';
        }
    }
}

void write_kernel_values_csv(std::ostream& os, const KernelSet& kernels,
                             std::span<const double> xs) {
    os << "x";
    for (int n = 1; n <= kernels.N; ++n)
        os << ",re_g" << n << ",im_g" << n;
    os << '\n';
    for (double x : xs) {
        print_real(os, x);
        for (int n = 1; n <= kernels.N; ++n) {
            const Complex v = kernels.value(n, x);
            os << ',';
            print_real(os, v.real());
            os << ',';
            print_real(os, v.imag());
        }
        os << '\n';
    }
}

void write_samples_csv(std::ostream& os, const SampleSet& samples) {
    os << "n,m,re,im\n";
    for (int n = 1; n <= samples.N; ++n) {
        for (int m = -samples.M; m <= samples.M; ++m) {
            const Complex v = samples.at(n, m);
            os << n << ',' << m << ',';
            print_real(os, v.real());
            os << ',';
            print_real(os, v.imag());
            os << '\n';
        }
    }
}

void write_reconstruction_csv(std::ostream& os, const BandlimitedSignal& f,
                              const SampleSet& samples,
                              const KernelSet& kernels,
                              std::span<const double> xs) {
    os << "x,re_f_true,re_f_rec,abs_err\n";
    for (double x : xs) {
        const Complex truth = f(x);
        const Complex rec = reconstruct(samples, kernels, x).value;
        print_real(os, x);
        os << ',';
        print_real(os, truth.real());
        os << ',';
        print_real(os, rec.real());
        os << ',';
        print_real(os, std::abs(truth - rec));
        os << '\n';
    }
}

}  // namespace pwinterp
