#pragma once

#include "minionlab/error.hpp"
#include "minionlab/rng.hpp"

#include <string>
#include <vector>

namespace minionlab {

/// A total map pi : [l] -> [l'] between arity index sets. Indices are
/// 0-based internally; serialized documents use 1-based positions.
class MinorMap {
public:
    MinorMap(int source_arity, int target_arity, std::vector<int> image)
        : target_arity_(target_arity), image_(std::move(image)) {
        if (source_arity < 1 || target_arity < 1)
            throw Error("minor map: arities must be positive");
        if (static_cast<int>(image_.size()) != source_arity)
            throw Error("minor map: image size does not match source arity");
        for (int v : image_)
            if (v < 0 || v >= target_arity_)
                throw Error("minor map: image value out of range");
    }

    static MinorMap identity(int arity) {
        std::vector<int> img(arity);
        for (int i = 0; i < arity; ++i)
            img[i] = i;
        return {arity, arity, std::move(img)};
    }

    /// The map [1] -> [l] sending the unique source index to i.
    static MinorMap single(int i, int arity) { return {1, arity, {i}}; }

    static MinorMap random(Rng& rng, int source_arity, int target_arity) {
        std::vector<int> img(source_arity);
        for (int& v : img)
            v = rng.uniform_int(0, target_arity - 1);
        return {source_arity, target_arity, std::move(img)};
    }

    int source_arity() const { return static_cast<int>(image_.size()); }
    int target_arity() const { return target_arity_; }
    int operator()(int i) const { return image_[i]; }
    const std::vector<int>& image() const { return image_; }

    /// Composition: first this, then tilde (i.e. tilde \circ this).
    MinorMap then(const MinorMap& tilde) const {
        if (tilde.source_arity() != target_arity_)
            throw Error("minor map composition: arity mismatch");
        std::vector<int> img(image_.size());
        for (std::size_t i = 0; i < image_.size(); ++i)
            img[i] = tilde(image_[i]);
        return {source_arity(), tilde.target_arity(), std::move(img)};
    }

    /// Preimage lists per target index, each in ascending source order.
    std::vector<std::vector<int>> preimages() const {
        std::vector<std::vector<int>> pre(target_arity_);
        for (int i = 0; i < source_arity(); ++i)
            pre[image_[i]].push_back(i);
        return pre;
    }

    bool is_identity() const {
        if (target_arity_ != source_arity())
            return false;
        for (int i = 0; i < source_arity(); ++i)
            if (image_[i] != i)
                return false;
        return true;
    }

    std::string describe() const {
        std::string s = "[" + std::to_string(source_arity()) + "]->[" +
                        std::to_string(target_arity_) + "]:";
        for (std::size_t i = 0; i < image_.size(); ++i)
            s += (i ? "," : " ") + std::to_string(image_[i] + 1);
        return s;
    }

    bool operator==(const MinorMap& o) const {
        return target_arity_ == o.target_arity_ && image_ == o.image_;
    }

private:
    int target_arity_;
    std::vector<int> image_;
};

} // namespace minionlab
