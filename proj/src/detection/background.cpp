#include "crowdkit/detection/background.hpp"

#include <sstream>
#include <stdexcept>

#include "crowdkit/common/textio.hpp"

namespace crowdkit {

BackgroundModel read_background_file(const std::string& path) {
    BackgroundModel bg;
    for (const auto& raw : read_lines(path)) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_ws(line);
        if (f.size() != 6)
            throw std::runtime_error(path + ": background box needs 6 fields, got " +
                                     std::to_string(f.size()));
        BackgroundBox box;
        box.min = {parse_double(f[0], "xmin"), parse_double(f[1], "ymin"), parse_double(f[2], "zmin")};
        box.max = {parse_double(f[3], "xmax"), parse_double(f[4], "ymax"), parse_double(f[5], "zmax")};
        if (!box.min.finite() || !box.max.finite())
            throw std::runtime_error(path + ": non-finite background box");
        if (box.min.x > box.max.x || box.min.y > box.max.y || box.min.z > box.max.z)
            throw std::runtime_error(path + ": inverted background box '" + line + "'");
        bg.boxes.push_back(box);
    }
    return bg;
}

void write_background_file(const std::string& path, const BackgroundModel& bg) {
    std::ostringstream os;
    os << "# xmin ymin zmin xmax ymax zmax\n";
    for (const auto& b : bg.boxes)
        os << fmt_double(b.min.x) << ' ' << fmt_double(b.min.y) << ' ' << fmt_double(b.min.z) << ' '
           << fmt_double(b.max.x) << ' ' << fmt_double(b.max.y) << ' ' << fmt_double(b.max.z)
           << "\n";
    write_text_file(path, os.str());
}

}  // namespace crowdkit
