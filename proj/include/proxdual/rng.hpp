#pragma once
//
// pdrng-v1: counter-based random streams for reproducible instances.
//
// A stream is identified by (seed, stream id). Its k-th 64-bit output
// (k = 0, 1, ...) is
//
//     key = mix64( seed ^ 0x243F6A8885A308D3 )
//     sk  = mix64( key + (stream + 1) * 0x9E3779B97F4A7C15 )
//     out = mix64( sk  + (k + 1)      * 0x9E3779B97F4A7C15 )
//
// where mix64 is the SplitMix64 finaliser. Uniforms take the top 53 bits,
// (out >> 11) * 2^-53, in [0,1). Each standard normal consumes two uniforms
// u1, u2 and returns sqrt(-2 ln(1 - u1)) * cos(2 pi u2). Every generated
// array owns a separate stream and is filled in row-major order, so
// instances can be reproduced in any language.
//

#include "core.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace proxdual {

class CounterRng
{
public:
    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

    CounterRng ( std::uint64_t seed, std::uint64_t stream )
        : _key( mix64( mix64( seed ^ 0x243F6A8885A308D3ULL ) + ( stream + 1 ) * golden ) )
    {}

    static constexpr std::uint64_t
    mix64 ( std::uint64_t x )
    {
        x = ( x ^ ( x >> 30 ) ) * 0xBF58476D1CE4E5B9ULL;
        x = ( x ^ ( x >> 27 ) ) * 0x94D049BB133111EBULL;
        return x ^ ( x >> 31 );
    }

    std::uint64_t next_u64 () { return mix64( _key + ( ++_counter ) * golden ); }

    double uniform () { return double( next_u64() >> 11 ) * 0x1.0p-53; }

    double
    normal ()
    {
        const double  u1 = uniform();
        const double  u2 = uniform();

        return std::sqrt( -2.0 * std::log1p( -u1 ) ) * std::cos( 2.0 * std::numbers::pi * u2 );
    }

    // integer in [0, n) by multiply-shift on the top 53 bits
    std::uint64_t below ( std::uint64_t n ) { return std::uint64_t( uniform() * double( n ) ); }

    Vector
    normal_vector ( Index n )
    {
        Vector  v( n );

        for ( Index i = 0; i < n; ++i )
            v( i ) = normal();

        return v;
    }

    Matrix
    normal_matrix ( Index rows, Index cols )
    {
        Matrix  m( rows, cols );

        for ( Index i = 0; i < rows; ++i )
            for ( Index j = 0; j < cols; ++j )
                m( i, j ) = normal();

        return m;
    }

    std::uint64_t counter () const { return _counter; }

private:
    std::uint64_t  _key;
    std::uint64_t  _counter = 0;
};

}// namespace proxdual
