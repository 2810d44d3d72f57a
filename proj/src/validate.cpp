#include "curveloc/validate.hpp"

#include <iomanip>
#include <random>
#include <sstream>

namespace curveloc {

const char* to_string(Method m) { return m == Method::Trap ? "trap" : "landmark"; }

ValidationReport validate_index(const AugmentedIndex& index, Method method, int num_samples, std::uint64_t seed,
                                double epsilon) {
    const auto& sub = index.sub;
    if (epsilon <= 0) epsilon = sub.epsilon;
    ValidationReport rep;
    rep.method = method;
    rep.face_identity_checked = sub.curves.size() <= 6;
    std::optional<FaceLocator> faces;
    if (rep.face_identity_checked) faces.emplace(sub.A);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(sub.box.min.x, sub.box.max.x), uy(sub.box.min.y, sub.box.max.y);
    for (int i = 0; i < num_samples; ++i) {
        const double x = ux(rng);
        const Point q{x, uy(rng)};
        ++rep.drawn;
        const NaiveResult truth = naive_locate(sub.curves, q, epsilon);
        if (has_on_flag(truth.signs)) {
            ++rep.skipped_on;
            continue;
        }
        const QueryResult r = method == Method::Trap ? locate(index, q) : locate_landmark(index, q);
        if (r.signs == truth.signs) {
            ++rep.agreed;
        } else {
            rep.mismatches.push_back({q, truth.signs, r.signs, r.face});
        }
        if (faces && faces->locate(q) != r.face) ++rep.face_identity_failures;
    }
    return rep;
}

std::string format_report(const ValidationReport& r) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "method=" << to_string(r.method) << " drawn=" << r.drawn << " skipped_on=" << r.skipped_on
       << " checked=" << r.checked() << " agreed=" << r.agreed << " rate=" << r.rate();
    if (r.face_identity_checked) os << " face_identity_failures=" << r.face_identity_failures;
    os << '\n';
    for (const auto& m : r.mismatches) {
        os << "mismatch x=" << m.q.x << " y=" << m.q.y << " expected=" << format_signs(m.expected)
           << " got=" << format_signs(m.got) << " face=" << m.face << '\n';
    }
    return os.str();
}

}  // namespace curveloc
