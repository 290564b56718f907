#include "sled/image.hpp"

namespace sled {

GrayImage luminance(const RgbImage& img) {
    GrayImage out(img.width, img.height);
    const std::size_t n = img.n_pixels();
    for (std::size_t i = 0; i < n; ++i) {
        const float* p = img.data.data() + 3 * i;
        out.data[i] = 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2];
    }
    return out;
}

} // namespace sled
