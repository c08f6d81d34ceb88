#include "subgoal/learner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace subgoal {
namespace {

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

template <class T>
T parse_field(std::string_view field, int line) {
    T v{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::runtime_error("q-table csv: bad field '" + std::string(field) + "' on line " +
                                 std::to_string(line));
    return v;
}

}  // namespace

double stddev_from_sums(std::int64_t t, double s1, double s2) {
    if (t < 2) throw std::domain_error("standard deviation needs at least two samples");
    const double td = static_cast<double>(t);
    const double var = (td * s2 - s1 * s1) / (td * (td - 1.0));
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

QTable::QTable(int rows, int cols, int num_actions)
    : rows_(rows), cols_(cols), num_actions_(num_actions),
      data_(static_cast<std::size_t>(rows) * cols * num_actions) {
    if (rows <= 0 || cols <= 0 || num_actions <= 0) throw std::invalid_argument("q-table shape must be positive");
}

ActionStats& QTable::at(GridPos s, int a) {
    if (s.row < 0 || s.col < 0 || s.row >= rows_ || s.col >= cols_ || a < 0 || a >= num_actions_)
        throw std::out_of_range("q-table index out of range");
    return (*this)(s, a);
}

const ActionStats& QTable::at(GridPos s, int a) const { return const_cast<QTable&>(*this).at(s, a); }

std::vector<double> QTable::q_values(GridPos s, int count) const {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int a = 0; a < count; ++a) out[a] = (*this)(s, a).q;
    return out;
}

void QTable::write_csv(std::ostream& out) const {
    out << "row,col,action,q,n,s1,s2,t_samples\n";
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            for (int a = 0; a < num_actions_; ++a) {
                const auto& st = (*this)({r, c}, a);
                out << r << ',' << c << ',' << a << ',' << shortest(st.q) << ',' << st.n << ',' << shortest(st.s1)
                    << ',' << shortest(st.s2) << ',' << st.t_samples << '\n';
            }
}

QTable QTable::read_csv(std::istream& in, int rows, int cols, int num_actions) {
    QTable table(rows, cols, num_actions);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line_no == 1) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (std::size_t p; (p = rest.find(',')) != std::string_view::npos; rest.remove_prefix(p + 1))
            f.push_back(rest.substr(0, p));
        f.push_back(rest);
        if (f.size() != 8) throw std::runtime_error("q-table csv: expected 8 columns on line " + std::to_string(line_no));
        GridPos s{parse_field<int>(f[0], line_no), parse_field<int>(f[1], line_no)};
        auto& st = table.at(s, parse_field<int>(f[2], line_no));
        st.q = parse_field<double>(f[3], line_no);
        st.n = parse_field<std::int64_t>(f[4], line_no);
        st.s1 = parse_field<double>(f[5], line_no);
        st.s2 = parse_field<double>(f[6], line_no);
        st.t_samples = parse_field<std::int64_t>(f[7], line_no);
    }
    return table;
}

void sarsa_update(QTable& table, GridPos s, int a, double reward, GridPos s_next, int a_next, double lambda,
                  double gamma) {
    auto& st = table.at(s, a);
    const double target = reward + gamma * table.at(s_next, a_next).q;
    st.q += lambda * (target - st.q);
    if (!std::isfinite(st.q)) throw std::overflow_error("non-finite q-value");
    st.n += 1;
    st.s1 += st.q;
    st.s2 += st.q * st.q;
    st.t_samples += 1;
}

void Schedules::validate() const {
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(lambda0) || !unit(eps0) || !unit(gamma)) throw std::invalid_argument("lambda0, eps0 and gamma must lie in [0, 1]");
    if (!unit(lambda_decay)) throw std::invalid_argument("lambda_decay must lie in [0, 1]");
    if (!(eps_decay >= 0.0)) throw std::invalid_argument("eps_decay must be non-negative");
}

double lambda_at(const Schedules& sch, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("schedule index must be non-negative");
    const double kd = static_cast<double>(k);
    if (sch.lambda_form == DecayForm::Inverse) return sch.lambda0 / (1.0 + sch.lambda_decay * kd);
    return sch.lambda0 * std::pow(1.0 - sch.lambda_decay, kd);
}

double epsilon_at(const Schedules& sch, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("schedule index must be non-negative");
    return sch.eps0 * std::exp(-sch.eps_decay * static_cast<double>(k));
}

ScheduleValues schedule_at(const Schedules& sch, std::int64_t k) { return {lambda_at(sch, k), epsilon_at(sch, k)}; }

std::vector<double> epsilon_greedy(std::span<const double> q, double epsilon) {
    if (q.empty()) throw std::invalid_argument("epsilon_greedy over an empty action set");
    const double best = *std::max_element(q.begin(), q.end());
    const auto ties = std::count(q.begin(), q.end(), best);
    const double n = static_cast<double>(q.size());
    std::vector<double> p(q.size(), epsilon / n);
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] == best) p[i] += (1.0 - epsilon) / static_cast<double>(ties);
    return p;
}

int select_action(std::span<const double> probs, Rng& rng) {
    if (probs.empty()) throw std::invalid_argument("empty probability vector");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("negative or NaN probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("probabilities do not sum to 1");
    const double u = rng.uniform() * total;
    double acc = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_positive = static_cast<int>(i);
        if (u < acc) return last_positive;
    }
    return last_positive;
}

}  // namespace subgoal
