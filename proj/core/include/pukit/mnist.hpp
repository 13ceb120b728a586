#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pukit/dataset.hpp"

namespace pukit {

// IDX readers (the classic big-endian MNIST container). Pixels are scaled to
// [0,1]. throws IoError on unreadable files or bad magic/shape.
std::vector<FeatureVector> read_idx_images(const std::string& path);
std::vector<std::uint8_t> read_idx_labels(const std::string& path);

// Digit 1 (positive) vs digit 7 (negative) PU task: n_p positive samples,
// n_u unlabeled mixed at alpha, plus a labeled eval pair drawn from the
// remaining images. All counts are before the internal train/holdout split.
// throws IoError when images/labels disagree, or there are not enough digits
struct Mnist17Task {
    PUDataset data;
    PUDataset eval;  // labeled: positives + pure negatives
};
Mnist17Task build_mnist17_task(const std::string& images_path, const std::string& labels_path,
                               std::size_t n_p, std::size_t n_u, double alpha,
                               std::size_t eval_per_class, RandomSeed seed);

}  // namespace pukit
