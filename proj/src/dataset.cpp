#include "gfc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gfc/kmeans.hpp"
#include "gfc/rng.hpp"
#include "json.hpp"

namespace gfc {

PointSet blob_centers(int n_clusters, int d, double separation) {
    PointSet centers(d);
    centers.reserve(static_cast<std::size_t>(n_clusters));
    for (int c = 0; c < n_clusters; ++c) {
        Vec center(d, 0.0);
        center[0] = separation * c;
        centers.push_back(center);
    }
    return centers;
}

Dataset generate_blobs(int n_clusters, int points_per_cluster, int d, double spread,
                       double separation, std::uint64_t seed) {
    if (n_clusters < 1) throw std::invalid_argument("generate_blobs: n_clusters must be >= 1");
    if (points_per_cluster < 1)
        throw std::invalid_argument("generate_blobs: points_per_cluster must be >= 1");
    if (d < 1) throw std::invalid_argument("generate_blobs: d must be >= 1");
    if (!(spread > 0.0)) throw std::invalid_argument("generate_blobs: spread must be > 0");
    if (!(separation > 0.0)) throw std::invalid_argument("generate_blobs: separation must be > 0");

    const PointSet centers = blob_centers(n_clusters, d, separation);
    Rng rng(seed);

    Dataset data;
    data.points = PointSet(d);
    data.points.reserve(static_cast<std::size_t>(n_clusters) * points_per_cluster);
    data.labels = std::vector<int>();
    data.labels->reserve(static_cast<std::size_t>(n_clusters) * points_per_cluster);

    Vec p(d);
    for (int c = 0; c < n_clusters; ++c) {
        for (int i = 0; i < points_per_cluster; ++i) {
            for (int k = 0; k < d; ++k) p[k] = centers[c][k] + spread * rng.normal();
            data.points.push_back(p);
            data.labels->push_back(c);
        }
    }
    return data;
}

namespace {

bool parse_double(const std::string& tok, double& out) {
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    if (begin == end) return false;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Dataset load_csv(const std::string& path, std::optional<int> label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::vector<double> raw_labels;
    std::string line;
    std::size_t line_no = 0;
    std::size_t n_cols = 0;
    bool first_content_row = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto toks = split_csv_line(line);

        if (first_content_row) {
            // Header auto-detection: any non-numeric cell in the first row.
            bool numeric = true;
            double tmp;
            for (const auto& t : toks)
                if (!parse_double(t, tmp)) {
                    numeric = false;
                    break;
                }
            n_cols = toks.size();
            first_content_row = false;
            if (!numeric) continue;  // header row, skip it
        }

        if (toks.size() != n_cols)
            throw std::runtime_error("load_csv: row " + std::to_string(line_no) + " has " +
                                     std::to_string(toks.size()) + " columns, expected " +
                                     std::to_string(n_cols));
        if (label_column && (*label_column < 0 || static_cast<std::size_t>(*label_column) >= n_cols))
            throw std::runtime_error("load_csv: label column out of range");

        std::vector<double> row;
        row.reserve(n_cols);
        for (std::size_t c = 0; c < toks.size(); ++c) {
            double v;
            if (!parse_double(toks[c], v))
                throw std::runtime_error("load_csv: row " + std::to_string(line_no) + ", column " +
                                         std::to_string(c) + ": not a number: '" + toks[c] + "'");
            if (label_column && static_cast<std::size_t>(*label_column) == c)
                raw_labels.push_back(v);
            else
                row.push_back(v);
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw std::runtime_error("load_csv: no data rows in " + path);
    const int d = static_cast<int>(rows[0].size());
    if (d < 1) throw std::runtime_error("load_csv: no feature columns");

    Dataset data;
    data.points = PointSet(d);
    data.points.reserve(rows.size());
    for (const auto& r : rows) data.points.push_back(r);

    if (label_column) {
        // Remap raw label values to compact ids, ordered by value.
        std::vector<double> uniq = raw_labels;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<int> labels;
        labels.reserve(raw_labels.size());
        for (double v : raw_labels) {
            const auto it = std::lower_bound(uniq.begin(), uniq.end(), v);
            labels.push_back(static_cast<int>(it - uniq.begin()));
        }
        data.labels = std::move(labels);
    }
    data.validate();
    return data;
}

std::vector<ClientShard> partition_non_iid(const Dataset& data, const PartitionSpec& spec) {
    const std::size_t n = data.size();
    if (spec.num_clients < 1)
        throw std::invalid_argument("partition_non_iid: num_clients must be >= 1");
    if (static_cast<std::size_t>(spec.num_clients) > n)
        throw std::invalid_argument("partition_non_iid: more clients than points");
    if (spec.n_clusters < 1)
        throw std::invalid_argument("partition_non_iid: n_clusters must be >= 1");

    const int num_clients = spec.num_clients;
    const int n_clusters = std::min<int>(spec.n_clusters, static_cast<int>(n));
    const std::size_t size = n / static_cast<std::size_t>(num_clients);  // floor

    KMeansConfig kcfg;
    kcfg.k = n_clusters;
    kcfg.max_iters = 50;
    kcfg.tol = 1e-6;
    kcfg.init_seed = derive_seed(spec.rng_seed, {hash_string("partition-kmeans")});
    const KMeansResult km = kmeans(data.points, kcfg);

    // Unassigned point indices per k-means cluster, ascending.
    std::vector<std::vector<std::size_t>> pool(n_clusters);
    for (std::size_t i = 0; i < n; ++i) pool[km.assignment[i]].push_back(i);
    for (auto& p : pool) std::reverse(p.begin(), p.end());  // pop_back yields ascending order

    Rng rng(derive_seed(spec.rng_seed, {hash_string("partition-draws")}));
    const std::size_t r1_lo =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                     static_cast<double>(size) / (n_clusters / 2.0))));

    const int max_client_retries = 8;
    std::vector<std::vector<std::size_t>> assigned(num_clients);

    for (int ci = 0; ci + 1 < num_clients; ++ci) {
        for (int attempt = 0; attempt < max_client_retries; ++attempt) {
            auto& mine = assigned[ci];

            int s1 = static_cast<int>(rng.uniform_index(n_clusters));
            int s2 = s1;
            if (n_clusters > 1) {
                s2 = static_cast<int>(rng.uniform_index(n_clusters - 1));
                if (s2 >= s1) ++s2;
            }

            for (int slot_cluster : {s1, s2}) {
                int s = slot_cluster;
                // Replacement draw on exhausted clusters, bounded by n_clusters tries.
                int tries = 0;
                while (pool[s].empty() && tries < n_clusters) {
                    s = static_cast<int>(rng.uniform_index(n_clusters));
                    ++tries;
                }
                if (pool[s].empty()) continue;

                const std::size_t lo = std::min(r1_lo, size);
                const std::size_t r1 = lo + rng.uniform_index(size - lo + 1);
                const std::size_t r2 = size > mine.size() ? size - mine.size() : 0;
                const std::size_t r3 = pool[s].size();
                const std::size_t take = std::min({r1, r2, r3});
                for (std::size_t t = 0; t < take; ++t) {
                    mine.push_back(pool[s].back());
                    pool[s].pop_back();
                }
            }

            if (!mine.empty()) break;
        }
        if (assigned[ci].empty())
            throw std::runtime_error("partition_non_iid: client " + std::to_string(ci) +
                                     " received no points after retries");
    }

    // Last client absorbs everything left.
    auto& last = assigned[num_clients - 1];
    for (auto& p : pool)
        while (!p.empty()) {
            last.push_back(p.back());
            p.pop_back();
        }
    if (last.empty()) {
        // Move one point from the largest shard so no shard is empty.
        int largest = 0;
        for (int ci = 1; ci + 1 < num_clients; ++ci)
            if (assigned[ci].size() > assigned[largest].size()) largest = ci;
        last.push_back(assigned[largest].back());
        assigned[largest].pop_back();
    }

    std::vector<ClientShard> shards(num_clients);
    for (int ci = 0; ci < num_clients; ++ci) {
        std::sort(assigned[ci].begin(), assigned[ci].end());
        ClientShard& sh = shards[ci];
        sh.client_id = ci;
        sh.point_indices = assigned[ci];
        sh.points = data.points.gather(assigned[ci]);
        if (data.labels) {
            sh.labels = std::vector<int>();
            sh.labels->reserve(assigned[ci].size());
            for (std::size_t i : assigned[ci]) sh.labels->push_back((*data.labels)[i]);
        }
    }
    return shards;
}

std::string partition_to_json(const std::vector<ClientShard>& shards) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& sh : shards) {
        nlohmann::json e;
        e["client_id"] = sh.client_id;
        e["point_indices"] = sh.point_indices;
        j.push_back(e);
    }
    return j.dump();
}

}  // namespace gfc
