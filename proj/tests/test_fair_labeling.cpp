#include "fairssl/error.hpp"
#include "fairssl/fair_labeling.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace fairssl;
using fairssl::testing::make_dataset;

namespace {

// One feature. Privileged rows are labeled 1 above 0, unprivileged rows above 1,
// so the group models disagree for x in (0, 1).
TabularDataset two_threshold_data(std::size_t per_group, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 4.0);
    const std::size_t n = 2 * per_group;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 1);
    std::vector<int> labels(n), prot(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = u(rng);
        x(static_cast<Eigen::Index>(i), 0) = v;
        prot[i] = i < per_group ? 1 : 0;
        labels[i] = v > (prot[i] == 1 ? 0.0 : 1.0) ? 1 : 0;
    }
    return make_dataset(x, labels, prot);
}

TrainingConfig crisp() {
    TrainingConfig c;
    c.optimizer = Optimizer::newton;
    c.epochs = 100;
    return c;
}

// Group-balanced dataset where every (group x class) cell has `sizes[g]` rows.
TabularDataset sized_groups(const std::array<std::size_t, 4>& sizes) {
    std::vector<int> labels, prot;
    for (GroupTag g : kAllGroups) {
        for (std::size_t i = 0; i < sizes[static_cast<std::size_t>(g)]; ++i) {
            labels.push_back(group_label(g));
            prot.push_back(group_protected(g));
        }
    }
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), 1);
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, 0) = static_cast<double>(i);
    return make_dataset(x, labels, prot);
}

std::map<GroupTag, std::size_t> group_counts(const TabularDataset& ds, const std::vector<std::size_t>& rows) {
    std::map<GroupTag, std::size_t> c;
    for (std::size_t r : rows) c[ds.group(r)]++;
    return c;
}

}  // namespace

TEST_CASE("partial labels keep ground truth write-once") {
    PartialLabels labels(4);
    labels.set_ground_truth(0, 1);
    labels.set_pseudo(2, 0, 0.9, LabelSource::self_training, 1);
    CHECK(labels.count(LabelState::ground_truth) == 1);
    CHECK(labels.count(LabelState::pseudo) == 1);
    CHECK(labels.count(LabelState::unlabeled) == 2);
    CHECK(labels.labeled_rows() == std::vector<std::size_t>{0, 2});
    CHECK(labels.unlabeled_rows() == std::vector<std::size_t>{1, 3});
    CHECK(labels.labeled_targets() == Eigen::Vector2d(1.0, 0.0));
    CHECK_THROWS_AS(labels.set_pseudo(0, 0, 0.9, LabelSource::self_training, 1), DataError);
    CHECK_THROWS_AS(labels.set_pseudo(2, 1, 0.9, LabelSource::self_training, 2), DataError);
    CHECK(labels[0].label == 1);
}

TEST_CASE("situation test drops rows where the group models contradict") {
    const auto ds = two_threshold_data(200, 1);
    const auto result = situation_test(ds, 5, crisp());

    std::set<std::size_t> kept(result.kept.begin(), result.kept.end());
    CHECK(result.kept.size() + result.discarded.size() == ds.rows());
    for (std::size_t r : result.discarded) CHECK(kept.count(r) == 0);

    // Re-derive every decision from the stored models.
    const Eigen::MatrixXd x = features_without(ds, ds.protected_column);
    CHECK(x.cols() == ds.features.cols() - 1);
    const auto p_priv = result.privileged_model.predict(x);
    const auto p_unpriv = result.unprivileged_model.predict(x);
    CHECK(p_priv == result.pred_privileged);
    CHECK(p_unpriv == result.pred_unprivileged);
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        const bool agree = p_priv[r] == ds.label(r) && p_unpriv[r] == ds.label(r);
        CHECK(agree == (kept.count(r) == 1));
    }

    // Rows clearly inside (0, 1) get contradicting predictions, rows far away are kept.
    int middle = 0, far = 0;
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        const double v = ds.features(static_cast<Eigen::Index>(r), 0);
        if (v > 0.2 && v < 0.8) {
            CHECK(p_priv[r] == 1);
            CHECK(p_unpriv[r] == 0);
            CHECK(kept.count(r) == 0);
            ++middle;
        }
        if (v < -0.5 || v > 1.5) {
            CHECK(kept.count(r) == 1);
            ++far;
        }
    }
    CHECK(middle > 10);
    CHECK(far > 200);
}

TEST_CASE("situation test is deterministic") {
    const auto ds = two_threshold_data(100, 2);
    const auto a = situation_test(ds, 9);
    const auto b = situation_test(ds, 9);
    CHECK(a.kept == b.kept);
    CHECK(a.privileged_model.weights == b.privileged_model.weights);
}

TEST_CASE("situation test rejects an empty group-class cell") {
    auto ds = sized_groups({5, 5, 5, 0});
    try {
        situation_test(ds, 1);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("UU") != std::string::npos);
    }
}

TEST_CASE("situation audit lists every row") {
    const auto ds = two_threshold_data(20, 3);
    const auto result = situation_test(ds, 1);
    testing::TempDir dir("audit");
    const auto path = dir.path() / "audit.csv";
    write_situation_audit(path, ds, result);
    const std::string text = testing::read_file(path);
    CHECK(text.rfind("row_id,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(ds.rows() + 1));
}

TEST_CASE("balanced initial sample takes the quota from each group") {
    const auto ds = sized_groups({100, 100, 100, 100});
    std::vector<std::size_t> all(ds.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto sel = sample_balanced_initial(ds, all, 0.10, 4);
    CHECK(sel.initial.size() == 40);
    CHECK(sel.quota == 10);
    for (const auto& [g, c] : group_counts(ds, sel.initial)) CHECK(c == 10);
    CHECK(sel.initial.size() + sel.remainder.size() == ds.rows());
    std::set<std::size_t> initial(sel.initial.begin(), sel.initial.end());
    for (std::size_t r : sel.remainder) CHECK(initial.count(r) == 0);
    CHECK(sel.labels.count(LabelState::ground_truth) == 40);
    CHECK(sel.labels.count(LabelState::unlabeled) == 360);
    for (std::size_t r : sel.initial) CHECK(sel.labels[r].label == ds.label(r));
}

TEST_CASE("quota shrinks to the scarcest group") {
    const auto ds = sized_groups({100, 100, 100, 100});
    std::vector<std::size_t> available;
    std::size_t uu_taken = 0;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        if (ds.group(i) == GroupTag::UU && uu_taken++ >= 6) continue;
        available.push_back(i);
    }
    const auto sel = sample_balanced_initial(ds, available, 0.10, 4);
    CHECK(sel.requested_quota == 10);
    CHECK(sel.quota == 6);
    CHECK(sel.initial.size() == 24);
    for (const auto& [g, c] : group_counts(ds, sel.initial)) CHECK(c == 6);
}

TEST_CASE("full budget selects every fair row") {
    const auto ds = sized_groups({50, 50, 50, 50});
    std::vector<std::size_t> all(ds.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto sel = sample_balanced_initial(ds, all, 1.0, 4);
    CHECK(sel.initial.size() == 200);
    CHECK(sel.remainder.empty());
}

TEST_CASE("initial sample errors and determinism") {
    const auto ds = sized_groups({20, 20, 20, 20});
    std::vector<std::size_t> no_fp;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        if (ds.group(i) != GroupTag::FP) no_fp.push_back(i);
    }
    CHECK_THROWS_AS(sample_balanced_initial(ds, no_fp, 0.5, 1), DataError);
    std::vector<std::size_t> all(ds.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    CHECK_THROWS(sample_balanced_initial(ds, all, 0.0, 1));
    CHECK_THROWS(sample_balanced_initial(ds, all, 1.5, 1));
    const auto a = sample_balanced_initial(ds, all, 0.5, 12);
    const auto b = sample_balanced_initial(ds, all, 0.5, 12);
    const auto c = sample_balanced_initial(ds, all, 0.5, 13);
    CHECK(a.initial == b.initial);
    CHECK(a.initial != c.initial);
}
