#pragma once

#include "colink/error.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace colink::detail {

// Writes through a temporary sibling and renames it into place.
inline void write_text_file(const std::filesystem::path& path, const std::string& bytes)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::io_error, "cannot write " + tmp.string());
        out << bytes;
        if (!out.flush())
            throw Error(Errc::io_error, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error(Errc::io_error, "cannot move " + tmp.string() + " into place: " + ec.message());
}

inline std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::file_not_found, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void ensure_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(Errc::io_error, "cannot create directory " + dir.string() + ": " + ec.message());
}

} // namespace colink::detail
