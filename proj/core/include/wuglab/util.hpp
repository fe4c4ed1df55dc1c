#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wuglab {

// ---------------------------------------------------------------------------
// Error taxonomy. Exit-code mapping: DataError family -> 1, usage -> 2.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};
struct DataError : Error {
    using Error::Error;
};
struct ArgumentError : Error {
    using Error::Error;
};
struct EncodingError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct NumericError : Error {
    using Error::Error;
};
/// Requested an umlaut on a stem with no back vowel.
struct NoBackVowelError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// UTF-8 helpers. German orthography needs multi-byte code points (a-umlaut
// etc.), so all character-level work is done on code point boundaries.
// ---------------------------------------------------------------------------

/// Splits a UTF-8 string into one std::string per code point.
/// Malformed bytes raise EncodingError.
std::vector<std::string> utf8_chars(std::string_view s);

/// Number of code points in s.
std::size_t utf8_length(std::string_view s);

/// Decodes the single code point starting at s[i]; advances i past it.
char32_t utf8_decode_at(std::string_view s, std::size_t& i);

/// Encodes one code point as UTF-8.
std::string utf8_encode(char32_t cp);

// ---------------------------------------------------------------------------
// Deterministic RNG. mt19937_64 is fully specified by the standard; the
// uniform/bounded mappings below are written out so streams are identical
// across standard libraries and platforms.
// ---------------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_uniform();
    }

    /// Unbiased integer in [0, n). Rejection sampling.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) throw ArgumentError("next_below: empty range");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = gen_();
        while (x >= limit) x = gen_();
        return x % n;
    }

    /// Fisher-Yates shuffle with the explicit bounded draw above.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            const std::size_t j =
                static_cast<std::size_t>(next_below(static_cast<std::uint64_t>(i) + 1));
            using std::swap;
            swap(v[i], v[j]);
        }
    }

    /// Index drawn proportionally to non-negative weights.
    std::size_t pick_weighted(std::span<const double> weights);

  private:
    std::mt19937_64 gen_;
};

/// Stable 64-bit seed derivation for substreams (epoch RNGs, dropout masks).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// ---------------------------------------------------------------------------
// Hashing and small string utilities.
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(std::string_view s);
std::string to_hex(std::uint64_t v);

/// FNV-1a of a whole file's bytes, as 16-digit hex. Missing file -> DataError.
std::string file_checksum(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);

}  // namespace wuglab
