#include "pukit/mnist.hpp"

#include <cstdio>
#include <fstream>

#include "pukit/errors.hpp"
#include "pukit/random.hpp"

namespace pukit {

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated IDX file: " + path);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
           std::uint32_t(b[3]);
}

}  // namespace

std::vector<FeatureVector> read_idx_images(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open IDX image file: " + path);
    if (read_be32(in, path) != 0x00000803u) {
        throw IoError("bad magic for IDX image file: " + path);
    }
    const std::uint32_t count = read_be32(in, path);
    const std::uint32_t rows = read_be32(in, path);
    const std::uint32_t cols = read_be32(in, path);
    const std::size_t pixels = std::size_t(rows) * cols;
    if (pixels == 0) throw IoError("empty image shape in IDX file: " + path);

    std::vector<FeatureVector> images(count);
    std::vector<unsigned char> buf(pixels);
    for (auto& img : images) {
        if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels))) {
            throw IoError("truncated IDX image data: " + path);
        }
        img.resize(pixels);
        for (std::size_t i = 0; i < pixels; ++i) img[i] = buf[i] / 255.0;
    }
    return images;
}

std::vector<std::uint8_t> read_idx_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open IDX label file: " + path);
    if (read_be32(in, path) != 0x00000801u) {
        throw IoError("bad magic for IDX label file: " + path);
    }
    const std::uint32_t count = read_be32(in, path);
    std::vector<std::uint8_t> labels(count);
    if (!in.read(reinterpret_cast<char*>(labels.data()), static_cast<std::streamsize>(count))) {
        throw IoError("truncated IDX label data: " + path);
    }
    return labels;
}

Mnist17Task build_mnist17_task(const std::string& images_path, const std::string& labels_path,
                               std::size_t n_p, std::size_t n_u, double alpha,
                               std::size_t eval_per_class, RandomSeed seed) {
    const auto images = read_idx_images(images_path);
    const auto labels = read_idx_labels(labels_path);
    if (images.size() != labels.size()) {
        throw IoError("IDX image/label counts differ: " + images_path + " vs " + labels_path);
    }

    std::vector<std::size_t> ones, sevens;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) ones.push_back(i);
        if (labels[i] == 7) sevens.push_back(i);
    }

    Rng rng(seed);
    rng.shuffle(ones);
    rng.shuffle(sevens);

    // consume each pool front to back: positives, then the unlabeled mix,
    // then the labeled eval pair
    std::size_t next_one = 0, next_seven = 0;
    const auto take = [&](std::vector<std::size_t>& pool, std::size_t& cursor,
                          const char* digit) -> const FeatureVector& {
        if (cursor >= pool.size()) {
            throw IoError(std::string("not enough digit-") + digit + " images in " + images_path);
        }
        return images[pool[cursor++]];
    };

    Mnist17Task out;
    out.data.alpha_true = alpha;
    for (std::size_t i = 0; i < n_p; ++i) out.data.positives.push_back(take(ones, next_one, "1"));

    std::vector<std::int8_t> hidden;
    for (std::size_t i = 0; i < n_u; ++i) {
        const bool positive = rng.bernoulli(alpha);
        if (positive) {
            out.data.unlabeled.push_back(take(ones, next_one, "1"));
        } else {
            out.data.unlabeled.push_back(take(sevens, next_seven, "7"));
        }
        hidden.push_back(positive ? std::int8_t{1} : std::int8_t{-1});
    }
    out.data.hidden_labels = HiddenLabels(std::move(hidden));

    for (std::size_t i = 0; i < eval_per_class; ++i) {
        out.eval.positives.push_back(take(ones, next_one, "1"));
        out.eval.unlabeled.push_back(take(sevens, next_seven, "7"));
    }
    out.eval.hidden_labels =
        HiddenLabels(std::vector<std::int8_t>(eval_per_class, -1));
    return out;
}

}  // namespace pukit
