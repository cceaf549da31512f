#pragma once
//
// Common types and error classes shared by every proxdual header.
//

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace proxdual {

using Index  = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Shape of a primal variable. Matrix variables are stored flattened in
// column-major order; the Euclidean inner product of the flattened vectors is
// the Frobenius inner product.
struct Shape
{
    Index rows      = 0;
    Index cols      = 1;
    bool  symmetric = false;

    static Shape vector ( Index n ) { return { n, 1, false }; }
    static Shape matrix ( Index m, Index n ) { return { m, n, false }; }
    static Shape sym_matrix ( Index n ) { return { n, n, true }; }

    Index size () const { return rows * cols; }
    bool  is_matrix () const { return cols > 1 || symmetric; }

    friend bool operator== ( const Shape &, const Shape & ) = default;
};

struct DimensionError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct ParameterError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error
{
    using std::domain_error::domain_error;
};

struct UnsupportedError : std::logic_error
{
    using std::logic_error::logic_error;
};

inline void
require_size ( Index got, Index want, const char * what )
{
    if ( got != want )
        throw DimensionError( std::string( what ) + ": expected length " + std::to_string( want ) +
                              ", got " + std::to_string( got ) );
}

// column-major views on flattened matrix variables
inline Eigen::Map< const Matrix >
as_matrix ( const Vector & x, Index rows, Index cols )
{
    return Eigen::Map< const Matrix >( x.data(), rows, cols );
}

inline Vector
flatten ( const Matrix & m )
{
    return Eigen::Map< const Vector >( m.data(), m.size() );
}

}// namespace proxdual
