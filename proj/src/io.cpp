// io.cpp

#include "heatops/io.hpp"

#include <fstream>

namespace heatops::io {

namespace {

json entries_to_json(const Matrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return entries;
}

Matrix entries_from_json(const json& entries, long rows, long cols) {
    if (!entries.is_array() || static_cast<long>(entries.size()) != rows * cols)
        throw shape_error("matrix entries: wrong element count");
    Matrix m(rows, cols);
    long idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const json& e = entries.at(idx++);
            if (!e.is_array() || e.size() != 2)
                throw shape_error("matrix entries: expected [re, im] pairs");
            m(i, j) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return m;
}

json real_vector_to_json(const RealVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

RealVector real_vector_from_json(const json& j) {
    RealVector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
    return v;
}

} // namespace

json matrix_to_json(const Matrix& m) {
    if (m.rows() != m.cols()) throw shape_error("matrix_to_json: expects a square matrix");
    return json{{"dim", m.rows()}, {"entries", entries_to_json(m)}};
}

Matrix matrix_from_json(const json& j) {
    const long dim = j.at("dim").get<long>();
    if (dim < 1) throw shape_error("matrix_from_json: dim must be positive");
    return entries_from_json(j.at("entries"), dim, dim);
}

json hermitian_to_json(const HermitianOperator& h) { return matrix_to_json(h.matrix()); }

HermitianOperator hermitian_from_json(const json& j, Units units) {
    return {matrix_from_json(j), units};
}

json state_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix()); }

DensityMatrix state_from_json(const json& j) { return DensityMatrix(matrix_from_json(j)); }

json isometry_to_json(const Isometry& v) {
    return json{{"dim_in", v.dim_in()},
                {"dim_out", v.dim_out()},
                {"entries", entries_to_json(v.matrix())}};
}

Isometry isometry_from_json(const json& j) {
    const long rows = j.at("dim_out").get<long>();
    const long cols = j.at("dim_in").get<long>();
    return Isometry(entries_from_json(j.at("entries"), rows, cols));
}

json channel_to_json(const KrausChannel& channel) {
    json kraus = json::array();
    for (const Matrix& m : channel.kraus()) kraus.push_back(entries_to_json(m));
    return json{{"dim_in", channel.dim_in()},
                {"dim_out", channel.dim_out()},
                {"kraus", kraus},
                {"minimal", channel.minimal()}};
}

KrausChannel channel_from_json(const json& j) {
    const long dim_in = j.at("dim_in").get<long>();
    const long dim_out = j.at("dim_out").get<long>();
    std::vector<Matrix> ops;
    for (const json& k : j.at("kraus")) ops.push_back(entries_from_json(k, dim_out, dim_in));
    const bool minimal = j.value("minimal", false);
    return KrausChannel(std::move(ops), minimal);
}

json realization_to_json(const DenseRealization& r) {
    json out{{"dim_A", r.dim_a()},
             {"beta", r.beta()},
             {"bath_h", hermitian_to_json(r.bath_h())},
             {"isometry", isometry_to_json(r.isometry())}};
    if (!r.square()) out["bath_h_out"] = hermitian_to_json(r.bath_h_out());
    return out;
}

DenseRealization realization_from_json(const json& j) {
    const int dim_a = j.at("dim_A").get<int>();
    const double beta = j.at("beta").get<double>();
    HermitianOperator bath_h = hermitian_from_json(j.at("bath_h"), Units::energy);
    Isometry v = isometry_from_json(j.at("isometry"));
    if (j.contains("bath_h_out")) {
        HermitianOperator bath_h_out = hermitian_from_json(j.at("bath_h_out"), Units::energy);
        return {dim_a, std::move(bath_h), std::move(bath_h_out), beta, std::move(v)};
    }
    return {dim_a, std::move(bath_h), beta, std::move(v)};
}

json heat_report_to_json(const HeatReport& report) {
    return json{{"hto", hermitian_to_json(report.hto)},
                {"j_of_beta_q", report.j_of_beta_q},
                {"bath_log_partition", report.bath_log_partition},
                {"kraus", channel_to_json(report.channel)}};
}

json chain_to_json(const ChainRealization& chain) {
    json out{{"kind", chain.kind == ChainKind::landauer ? "landauer" : "complete_erasure"},
             {"d", chain.dim_a},
             {"r", chain.rank_y},
             {"base_x", real_vector_to_json(chain.schedule_x.base)},
             {"base_y", real_vector_to_json(chain.schedule_y.base)},
             {"c", chain.schedule_x.c},
             {"s", chain.s},
             {"N", chain.n_x},
             {"M", chain.n_y},
             {"beta", chain.beta},
             {"epsilon_tail_achieved", chain.eps_tail_x},
             {"epsilon_tail_y_achieved", chain.eps_tail_y},
             {"delta_achieved", chain.delta_achieved},
             {"delta_target", chain.target_delta},
             {"ln_Z_B", chain.ln_z_b},
             {"rider_gap", chain.rider_gap},
             {"target_q", matrix_to_json(chain.target_q)},
             {"device_to_x", matrix_to_json(chain.device_to_x)},
             {"out_basis", matrix_to_json(chain.out_basis)},
             {"rho0_probs", real_vector_to_json(chain.rho0_probs)}};
    return out;
}

ChainRealization chain_from_json(const json& j) {
    ChainRealization chain;
    chain.kind = j.at("kind").get<std::string>() == "landauer" ? ChainKind::landauer
                                                               : ChainKind::complete_erasure;
    chain.dim_a = j.at("d").get<int>();
    chain.rank_y = j.at("r").get<int>();
    const double c = j.at("c").get<double>();
    chain.schedule_x = {ScheduleKind::x_type, real_vector_from_json(j.at("base_x")), c};
    chain.schedule_y = {ScheduleKind::y_type, real_vector_from_json(j.at("base_y")), c};
    chain.s = j.at("s").get<double>();
    chain.n_x = j.at("N").get<int>();
    chain.n_y = j.at("M").get<int>();
    chain.beta = j.at("beta").get<double>();
    chain.eps_tail_x = j.at("epsilon_tail_achieved").get<double>();
    chain.eps_tail_y = j.value("epsilon_tail_y_achieved", 0.0);
    chain.delta_achieved = j.at("delta_achieved").get<double>();
    chain.target_delta = j.at("delta_target").get<double>();
    chain.ln_z_b = j.at("ln_Z_B").get<double>();
    chain.rider_gap = j.value("rider_gap", 0.0);
    chain.target_q = matrix_from_json(j.at("target_q"));
    chain.device_to_x = matrix_from_json(j.at("device_to_x"));
    chain.out_basis = matrix_from_json(j.at("out_basis"));
    chain.rho0_probs = real_vector_from_json(j.at("rho0_probs"));
    return chain;
}

json verdict_to_json(const AdmissibilityVerdict& verdict) {
    const char* name = verdict.verdict == Verdict::admissible     ? "admissible"
                       : verdict.verdict == Verdict::inadmissible ? "inadmissible"
                                                                  : "boundary";
    json out{{"verdict", name},
             {"j_value", verdict.j_value},
             {"margin", verdict.margin},
             {"detail", verdict.detail}};
    if (verdict.isospectral_gap) out["isospectral_gap"] = *verdict.isospectral_gap;
    return out;
}

std::string serialize(const json& j) { return j.dump(2) + "\n"; }

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << content;
        if (!out.good()) throw std::runtime_error("atomic_write: write failed");
    }
    std::filesystem::rename(tmp, path);
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw shape_error("load_json: cannot open " + path.string());
    return json::parse(in);  // throws json::parse_error on malformed input
}

} // namespace heatops::io
