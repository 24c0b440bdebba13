#ifndef AUTOMATTE_SLIC_HPP
#define AUTOMATTE_SLIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "automatte/image.hpp"
#include "automatte/io.hpp"
#include "automatte/parallel.hpp"

// SLIC over-segmentation: k-means in (L,a,b,x,y) with a grid-limited search
// window, followed by connectivity enforcement. Fully deterministic: grid
// initialization, fixed tie-breaks (smaller label wins equal distances), and
// scan-order merging.

namespace automatte {

struct Region {
    int pixel_count = 0;
    double cx = 0.0, cy = 0.0; // subpixel centroid
    double mean_l = 0.0, mean_a = 0.0, mean_b = 0.0;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0; // inclusive bounding box
};

struct SuperpixelMap {
    int width = 0;
    int height = 0;
    std::vector<int> labels;
    std::vector<Region> regions;

    int label_count() const { return static_cast<int>(regions.size()); }
    int label_at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

struct SlicCenter {
    double l, a, b, x, y;
};

inline double gradient_at(const LabImage& img, int x, int y) {
    auto clampx = [&](int v) { return std::clamp(v, 0, img.width - 1); };
    auto clampy = [&](int v) { return std::clamp(v, 0, img.height - 1); };
    const double* xp = img.at(clampx(x + 1), y);
    const double* xm = img.at(clampx(x - 1), y);
    const double* yp = img.at(x, clampy(y + 1));
    const double* ym = img.at(x, clampy(y - 1));
    double g = 0;
    for (int c = 0; c < 3; ++c) {
        double dx = xp[c] - xm[c];
        double dy = yp[c] - ym[c];
        g += dx * dx + dy * dy;
    }
    return g;
}

// Merges stray components into neighbors per the declared policy: a component
// disconnected from its label's main component, or smaller than S^2/4, joins
// the largest adjacent surviving label (ties to the smaller label).
inline void enforce_connectivity(std::vector<int>& labels, int width, int height,
                                 double min_size) {
    const std::int64_t n = static_cast<std::int64_t>(width) * height;
    std::vector<int> comp(n, -1);
    std::vector<int> comp_label;
    std::vector<std::int64_t> comp_size;
    std::vector<std::vector<std::int64_t>> comp_pixels;

    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};

    std::deque<std::int64_t> queue;
    for (std::int64_t start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        int id = static_cast<int>(comp_label.size());
        comp_label.push_back(labels[start]);
        comp_size.push_back(0);
        comp_pixels.emplace_back();
        comp[start] = id;
        queue.push_back(start);
        while (!queue.empty()) {
            std::int64_t p = queue.front();
            queue.pop_front();
            comp_size[id]++;
            comp_pixels[id].push_back(p);
            int px = static_cast<int>(p % width), py = static_cast<int>(p / width);
            for (int k = 0; k < 4; ++k) {
                int qx = px + dx[k], qy = py + dy[k];
                if (qx < 0 || qx >= width || qy < 0 || qy >= height) continue;
                std::int64_t q = static_cast<std::int64_t>(qy) * width + qx;
                if (comp[q] < 0 && labels[q] == labels[start]) {
                    comp[q] = id;
                    queue.push_back(q);
                }
            }
        }
    }

    const int comp_count = static_cast<int>(comp_label.size());
    int max_label = *std::max_element(labels.begin(), labels.end());

    // main component of each label = largest, earliest in scan order on ties
    std::vector<int> main_comp(max_label + 1, -1);
    for (int c = 0; c < comp_count; ++c) {
        int l = comp_label[c];
        if (main_comp[l] < 0 || comp_size[c] > comp_size[main_comp[l]]) main_comp[c >= 0 ? l : l] = c;
    }

    std::vector<char> dissolve(comp_count, 0);
    for (int c = 0; c < comp_count; ++c)
        dissolve[c] = (main_comp[comp_label[c]] != c ||
                       static_cast<double>(comp_size[c]) < min_size)
                          ? 1
                          : 0;
    if (std::find(dissolve.begin(), dissolve.end(), char(0)) == dissolve.end()) {
        // nothing big enough anywhere: keep the largest component standing
        int best = 0;
        for (int c = 1; c < comp_count; ++c)
            if (comp_size[c] > comp_size[best]) best = c;
        dissolve[best] = 0;
    }

    std::vector<std::int64_t> label_size(max_label + 1, 0);
    for (int c = 0; c < comp_count; ++c)
        if (!dissolve[c]) label_size[comp_label[c]] += comp_size[c];

    // scan-order passes: each dissolving component joins the largest adjacent
    // surviving label; components walled in by other dissolving components
    // wait for a later pass
    std::vector<char> merged(comp_count, 0);
    bool progress = true;
    while (progress) {
        progress = false;
        for (int c = 0; c < comp_count; ++c) {
            if (!dissolve[c] || merged[c]) continue;
            int best_label = -1;
            std::int64_t best_size = -1;
            for (std::int64_t p : comp_pixels[c]) {
                int px = static_cast<int>(p % width), py = static_cast<int>(p / width);
                for (int k = 0; k < 4; ++k) {
                    int qx = px + dx[k], qy = py + dy[k];
                    if (qx < 0 || qx >= width || qy < 0 || qy >= height) continue;
                    std::int64_t q = static_cast<std::int64_t>(qy) * width + qx;
                    int qc = comp[q];
                    if (dissolve[qc] && !merged[qc]) continue;
                    int ql = labels[q];
                    if (label_size[ql] > best_size ||
                        (label_size[ql] == best_size && ql < best_label))
                        best_size = label_size[ql], best_label = ql;
                }
            }
            if (best_label < 0) continue;
            for (std::int64_t p : comp_pixels[c]) labels[p] = best_label;
            label_size[best_label] += comp_size[c];
            merged[c] = 1;
            progress = true;
        }
    }

    // contiguous renumbering in ascending old-label order
    std::vector<int> remap(max_label + 1, -1);
    int next = 0;
    for (int l = 0; l <= max_label; ++l)
        if (label_size[l] > 0) remap[l] = next++;
    for (std::int64_t p = 0; p < n; ++p) labels[p] = remap[labels[p]];
}

} // namespace detail

inline SuperpixelMap slic_segment(const LabImage& img, int n_target, double compactness,
                                  int iters, std::uint64_t seed = 0) {
    (void)seed; // initialization is deterministic; kept for interface stability
    const int w = img.width, h = img.height;
    const std::int64_t area = static_cast<std::int64_t>(w) * h;
    if (area == 0) throw InvalidArgument("slic_segment: zero-area image");
    if (n_target < 1 || n_target > area)
        throw InvalidArgument("slic_segment: n_target must be in [1, pixel count]");
    if (compactness <= 0) throw InvalidArgument("slic_segment: compactness must be positive");
    if (iters < 1) throw InvalidArgument("slic_segment: iters must be >= 1");

    const double S = std::sqrt(static_cast<double>(area) / n_target);

    // grid sized to hit n_target as a product of counts
    int nx = std::clamp<int>(static_cast<int>(std::llround(std::sqrt(
                 static_cast<double>(n_target) * w / h))), 1, w);
    int ny = std::clamp<int>(static_cast<int>(std::llround(static_cast<double>(n_target) / nx)),
                             1, h);

    std::vector<detail::SlicCenter> centers;
    centers.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int cx = std::clamp(static_cast<int>((i + 0.5) * w / nx), 0, w - 1);
            int cy = std::clamp(static_cast<int>((j + 0.5) * h / ny), 0, h - 1);
            // move to the lowest-gradient spot in the 3x3 neighborhood; the
            // original position wins ties so flat areas keep the grid
            double best_g = detail::gradient_at(img, cx, cy);
            int bx = cx, by = cy;
            for (int oy = -1; oy <= 1; ++oy) {
                for (int ox = -1; ox <= 1; ++ox) {
                    int x = std::clamp(cx + ox, 0, w - 1);
                    int y = std::clamp(cy + oy, 0, h - 1);
                    double g = detail::gradient_at(img, x, y);
                    if (g < best_g) {
                        best_g = g;
                        bx = x;
                        by = y;
                    }
                }
            }
            const double* px = img.at(bx, by);
            centers.push_back({px[0], px[1], px[2], static_cast<double>(bx),
                               static_cast<double>(by)});
        }
    }

    const int k = static_cast<int>(centers.size());
    const double m2_over_s2 = (compactness * compactness) / (S * S);
    std::vector<int> labels(area, -1);

    const int bx_count = static_cast<int>(w / S) + 2;
    const int by_count = static_cast<int>(h / S) + 2;
    auto bucket_of = [&](double v) { return static_cast<int>(v / S); };

    for (int iter = 0; iter < iters; ++iter) {
        // bucket grid over current center positions
        std::vector<std::vector<int>> buckets(static_cast<std::size_t>(bx_count) * by_count);
        for (int c = 0; c < k; ++c) {
            int bx = std::clamp(bucket_of(centers[c].x), 0, bx_count - 1);
            int by = std::clamp(bucket_of(centers[c].y), 0, by_count - 1);
            buckets[static_cast<std::size_t>(by) * bx_count + bx].push_back(c);
        }

        parallel_rows(h, [&](int y0, int y1) {
            for (int y = y0; y < y1; ++y) {
                for (int x = 0; x < w; ++x) {
                    const double* px = img.at(x, y);
                    double best_d = std::numeric_limits<double>::infinity();
                    int best_c = -1;
                    int blo = std::clamp(bucket_of(std::max(0.0, x - S)), 0, bx_count - 1);
                    int bhi = std::clamp(bucket_of(x + S), 0, bx_count - 1);
                    int blo_y = std::clamp(bucket_of(std::max(0.0, y - S)), 0, by_count - 1);
                    int bhi_y = std::clamp(bucket_of(y + S), 0, by_count - 1);
                    for (int by = blo_y; by <= bhi_y; ++by) {
                        for (int bx = blo; bx <= bhi; ++bx) {
                            for (int c : buckets[static_cast<std::size_t>(by) * bx_count + bx]) {
                                const auto& cc = centers[c];
                                double dx = x - cc.x, dy = y - cc.y;
                                if (std::abs(dx) > S || std::abs(dy) > S) continue;
                                double dl = px[0] - cc.l, da = px[1] - cc.a, db = px[2] - cc.b;
                                double d = dl * dl + da * da + db * db +
                                           (dx * dx + dy * dy) * m2_over_s2;
                                if (d < best_d || (d == best_d && c < best_c)) {
                                    best_d = d;
                                    best_c = c;
                                }
                            }
                        }
                    }
                    labels[static_cast<std::size_t>(y) * w + x] = best_c;
                }
            }
        });

        // fallback for pixels outside every search window
        for (std::int64_t p = 0; p < area; ++p) {
            if (labels[p] >= 0) continue;
            int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
            const double* px = img.at(x, y);
            double best_d = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < k; ++c) {
                const auto& cc = centers[c];
                double dx = x - cc.x, dy = y - cc.y;
                double dl = px[0] - cc.l, da = px[1] - cc.a, db = px[2] - cc.b;
                double d = dl * dl + da * da + db * db + (dx * dx + dy * dy) * m2_over_s2;
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            labels[p] = best_c;
        }

        // move centers to cluster means; empty clusters stay put
        std::vector<double> sums(static_cast<std::size_t>(k) * 6, 0.0);
        for (std::int64_t p = 0; p < area; ++p) {
            int c = labels[p];
            int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
            const double* px = img.at(x, y);
            double* s = &sums[static_cast<std::size_t>(c) * 6];
            s[0] += px[0];
            s[1] += px[1];
            s[2] += px[2];
            s[3] += x;
            s[4] += y;
            s[5] += 1;
        }
        for (int c = 0; c < k; ++c) {
            const double* s = &sums[static_cast<std::size_t>(c) * 6];
            if (s[5] > 0) {
                centers[c] = {s[0] / s[5], s[1] / s[5], s[2] / s[5], s[3] / s[5], s[4] / s[5]};
            }
        }
    }

    detail::enforce_connectivity(labels, w, h, S * S / 4.0);

    SuperpixelMap map;
    map.width = w;
    map.height = h;
    map.labels = std::move(labels);
    int count = *std::max_element(map.labels.begin(), map.labels.end()) + 1;
    map.regions.assign(count, Region{});
    std::vector<double> csum(static_cast<std::size_t>(count) * 5, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int l = map.label_at(x, y);
            Region& r = map.regions[l];
            if (r.pixel_count == 0) {
                r.x0 = r.x1 = x;
                r.y0 = r.y1 = y;
            } else {
                r.x0 = std::min(r.x0, x);
                r.x1 = std::max(r.x1, x);
                r.y0 = std::min(r.y0, y);
                r.y1 = std::max(r.y1, y);
            }
            r.pixel_count++;
            const double* px = img.at(x, y);
            double* s = &csum[static_cast<std::size_t>(l) * 5];
            s[0] += x;
            s[1] += y;
            s[2] += px[0];
            s[3] += px[1];
            s[4] += px[2];
        }
    }
    for (int l = 0; l < count; ++l) {
        Region& r = map.regions[l];
        const double* s = &csum[static_cast<std::size_t>(l) * 5];
        r.cx = s[0] / r.pixel_count;
        r.cy = s[1] / r.pixel_count;
        r.mean_l = s[2] / r.pixel_count;
        r.mean_a = s[3] / r.pixel_count;
        r.mean_b = s[4] / r.pixel_count;
    }
    return map;
}

// Per-label median of a field; even-sized regions take the lower-middle
// order statistic.
inline std::vector<double> region_median(const SuperpixelMap& sp, const ScalarField& field) {
    if (sp.width != field.width || sp.height != field.height)
        throw InvalidArgument("region_median: dimension mismatch");
    std::vector<std::vector<double>> per_label(sp.label_count());
    for (int l = 0; l < sp.label_count(); ++l)
        per_label[l].reserve(sp.regions[l].pixel_count);
    for (std::size_t p = 0; p < field.values.size(); ++p)
        per_label[sp.labels[p]].push_back(field.values[p]);
    std::vector<double> medians(sp.label_count());
    for (int l = 0; l < sp.label_count(); ++l) {
        auto& v = per_label[l];
        std::size_t mid = (v.size() - 1) / 2;
        std::nth_element(v.begin(), v.begin() + mid, v.end());
        medians[l] = v[mid];
    }
    return medians;
}

inline void write_label_pgm(const SuperpixelMap& sp, const std::string& path) {
    if (sp.label_count() > 65536) throw InvalidArgument("write_label_pgm: more than 65536 labels");
    std::vector<std::uint16_t> v(sp.labels.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::uint16_t>(sp.labels[i]);
    save_pgm16(sp.width, sp.height, v, path);
}

inline void write_region_csv(const SuperpixelMap& sp, const std::string& path) {
    std::string csv = "label,count,cx,cy,L,a,b\n";
    char line[256];
    for (int l = 0; l < sp.label_count(); ++l) {
        const Region& r = sp.regions[l];
        std::snprintf(line, sizeof line, "%d,%d,%.4f,%.4f,%.4f,%.4f,%.4f\n", l, r.pixel_count,
                      r.cx, r.cy, r.mean_l, r.mean_a, r.mean_b);
        csv += line;
    }
    save_text(path, csv);
}

} // namespace automatte

#endif
