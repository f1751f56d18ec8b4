#pragma once

#include <string>
#include <vector>

namespace cuspext {

std::string format_g17(double v);
std::string format_g17l(long double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
std::vector<std::string> split_csv_line(const std::string& line);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<unsigned char> rgb;  // row-major, 3 bytes per pixel
};

// Binary P6, 8-bit, header exactly "P6\n<w> <h>\n255\n".
void write_ppm(const Image& img, const std::string& path);

}  // namespace cuspext
