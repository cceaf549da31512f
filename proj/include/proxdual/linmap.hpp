#pragma once
//
// Affine-constraint operators A : X -> R^m together with their adjoints.
//

#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <variant>
#include <vector>

namespace proxdual {

class LinearMap
{
public:
    // explicit m x n matrix acting on vectors
    struct DenseRows
    {
        Matrix a;
    };

    // extraction of matrix entries in declaration order; on symmetric inputs an
    // off-diagonal entry (i,j) stands for the pair {(i,j),(j,i)} and measures
    // X_ij + X_ji so that the mirrored adjoint is the exact transpose
    struct EntryMask
    {
        std::vector< std::pair< Index, Index > > entries;
    };

    // e^T x
    struct SingleSum
    {
    };

    // [A_1, A_2, ...] acting on the concatenation (x_1, x_2, ...)
    struct Stack
    {
        std::vector< LinearMap > blocks;
    };

    using Payload = std::variant< DenseRows, EntryMask, SingleSum, Stack >;

    static LinearMap
    dense_rows ( Matrix a )
    {
        const auto  n = a.cols();
        const auto  m = a.rows();

        return LinearMap( Shape::vector( n ), m, DenseRows{ std::move( a ) } );
    }

    static LinearMap
    entry_mask ( Shape shape, std::vector< std::pair< Index, Index > > entries )
    {
        for ( auto & [ i, j ] : entries )
        {
            if ( i < 0 || j < 0 || i >= shape.rows || j >= shape.cols )
                throw DimensionError( "entry_mask: index out of range" );
            if ( shape.symmetric && i > j )
                std::swap( i, j );
        }

        const auto  m = Index( entries.size() );

        return LinearMap( shape, m, EntryMask{ std::move( entries ) } );
    }

    // diagonal of a (symmetric) n x n matrix
    static LinearMap
    diagonal ( Shape shape )
    {
        std::vector< std::pair< Index, Index > >  entries;

        for ( Index i = 0; i < std::min( shape.rows, shape.cols ); ++i )
            entries.emplace_back( i, i );

        return entry_mask( shape, std::move( entries ) );
    }

    static LinearMap
    single_sum ( Index n )
    {
        return LinearMap( Shape::vector( n ), 1, SingleSum{} );
    }

    static LinearMap
    stack ( std::vector< LinearMap > blocks )
    {
        if ( blocks.empty() )
            throw DimensionError( "stack: no blocks" );

        Index  n = 0;

        for ( const auto & blk : blocks )
        {
            if ( blk.output_dim() != blocks.front().output_dim() )
                throw DimensionError( "stack: blocks disagree on output dimension" );
            n += blk.input_shape().size();
        }

        const auto  m = blocks.front().output_dim();

        return LinearMap( Shape::vector( n ), m, Stack{ std::move( blocks ) } );
    }

    const Shape &   input_shape () const { return _shape; }
    Index           input_size () const { return _shape.size(); }
    Index           output_dim () const { return _m; }
    const Payload & payload () const { return _payload; }

    Vector
    apply ( const Vector & x ) const
    {
        require_size( x.size(), input_size(), "LinearMap::apply" );

        return std::visit( [&] ( const auto & p ) { return apply_impl( p, x ); }, _payload );
    }

    Vector
    adjoint ( const Vector & w ) const
    {
        require_size( w.size(), _m, "LinearMap::adjoint" );

        return std::visit( [&] ( const auto & p ) { return adjoint_impl( p, w ); }, _payload );
    }

    // explicit m x N matrix of the operator
    Matrix
    dense () const
    {
        Matrix  a( _m, input_size() );
        Vector  e = Vector::Zero( _m );

        for ( Index k = 0; k < _m; ++k )
        {
            e( k )    = 1.0;
            a.row( k ) = adjoint( e ).transpose();
            e( k )    = 0.0;
        }

        return a;
    }

    // A A^*
    Matrix
    gram () const
    {
        if ( const auto * d = std::get_if< DenseRows >( &_payload ) )
            return d->a * d->a.transpose();

        if ( std::holds_alternative< SingleSum >( _payload ) )
            return Matrix::Constant( 1, 1, double( input_size() ) );

        if ( const auto * s = std::get_if< Stack >( &_payload ) )
        {
            Matrix  g = Matrix::Zero( _m, _m );

            for ( const auto & blk : s->blocks )
                g += blk.gram();

            return g;
        }

        Matrix  g( _m, _m );
        Vector  e = Vector::Zero( _m );

        for ( Index k = 0; k < _m; ++k )
        {
            e( k )    = 1.0;
            g.col( k ) = apply( adjoint( e ) );
            e( k )    = 0.0;
        }

        return g;
    }

    //
    // smallest eigenvalue of A A^*; dense eigensolve up to `dense_cap`,
    // Lanczos with full reorthogonalisation above
    //
    double
    gram_min_eig ( Index dense_cap = 5000 ) const
    {
        return gram_extreme_eigs( dense_cap ).first;
    }

    std::pair< double, double >
    gram_extreme_eigs ( Index dense_cap = 5000 ) const
    {
        if ( _m <= dense_cap )
        {
            Eigen::SelfAdjointEigenSolver< Matrix >  eig( gram(), Eigen::EigenvaluesOnly );

            if ( eig.info() != Eigen::Success )
                throw NumericalError( "gram_min_eig: eigensolver failed" );

            return { eig.eigenvalues()( 0 ), eig.eigenvalues()( _m - 1 ) };
        }

        return lanczos_extremes( std::min< Index >( _m, 300 ) );
    }

private:
    LinearMap ( Shape shape, Index m, Payload payload )
        : _shape( shape )
        , _m( m )
        , _payload( std::move( payload ) )
    {}

    Vector apply_impl ( const DenseRows & p, const Vector & x ) const { return p.a * x; }

    Vector
    apply_impl ( const EntryMask & p, const Vector & x ) const
    {
        const auto  X = as_matrix( x, _shape.rows, _shape.cols );
        Vector      out( _m );

        for ( Index k = 0; k < _m; ++k )
        {
            const auto [ i, j ] = p.entries[ k ];

            out( k ) = ( _shape.symmetric && i != j ) ? X( i, j ) + X( j, i ) : X( i, j );
        }

        return out;
    }

    Vector apply_impl ( const SingleSum &, const Vector & x ) const { return Vector::Constant( 1, x.sum() ); }

    Vector
    apply_impl ( const Stack & p, const Vector & x ) const
    {
        Vector  out = Vector::Zero( _m );
        Index   ofs = 0;

        for ( const auto & blk : p.blocks )
        {
            const auto  len = blk.input_size();

            out += blk.apply( x.segment( ofs, len ) );
            ofs += len;
        }

        return out;
    }

    Vector adjoint_impl ( const DenseRows & p, const Vector & w ) const { return p.a.transpose() * w; }

    Vector
    adjoint_impl ( const EntryMask & p, const Vector & w ) const
    {
        Matrix  X = Matrix::Zero( _shape.rows, _shape.cols );

        for ( Index k = 0; k < _m; ++k )
        {
            const auto [ i, j ] = p.entries[ k ];

            X( i, j ) += w( k );
            if ( _shape.symmetric && i != j )
                X( j, i ) += w( k );
        }

        return flatten( X );
    }

    Vector adjoint_impl ( const SingleSum &, const Vector & w ) const { return Vector::Constant( input_size(), w( 0 ) ); }

    Vector
    adjoint_impl ( const Stack & p, const Vector & w ) const
    {
        Vector  out( input_size() );
        Index   ofs = 0;

        for ( const auto & blk : p.blocks )
        {
            const auto  len = blk.input_size();

            out.segment( ofs, len ) = blk.adjoint( w );
            ofs += len;
        }

        return out;
    }

    std::pair< double, double >
    lanczos_extremes ( Index steps ) const
    {
        Matrix  Q( _m, steps + 1 );
        Vector  alpha( steps ), beta( steps );
        Vector  q = Vector::Ones( _m ).normalized();
        Index   k = 0;

        Q.col( 0 ) = q;

        for ( ; k < steps; ++k )
        {
            Vector  w = apply( adjoint( Q.col( k ) ) );

            alpha( k ) = Q.col( k ).dot( w );
            // full reorthogonalisation
            for ( int pass = 0; pass < 2; ++pass )
                w -= Q.leftCols( k + 1 ) * ( Q.leftCols( k + 1 ).transpose() * w );
            beta( k ) = w.norm();
            if ( beta( k ) < 1e-14 )
            {
                ++k;
                break;
            }
            Q.col( k + 1 ) = w / beta( k );
        }

        Matrix  T = Matrix::Zero( k, k );

        for ( Index i = 0; i < k; ++i )
        {
            T( i, i ) = alpha( i );
            if ( i + 1 < k )
                T( i, i + 1 ) = T( i + 1, i ) = beta( i );
        }

        Eigen::SelfAdjointEigenSolver< Matrix >  eig( T, Eigen::EigenvaluesOnly );

        return { eig.eigenvalues()( 0 ), eig.eigenvalues()( k - 1 ) };
    }

    Shape    _shape;
    Index    _m;
    Payload  _payload;
};

//
// Euclidean projection onto { x | A x = b } using a one-time Cholesky
// factorisation of A A^*.
//
class AffineProjector
{
public:
    AffineProjector ( const LinearMap & map, Vector b )
        : _map( map )
        , _b( std::move( b ) )
        , _llt( map.gram() )
    {
        require_size( _b.size(), map.output_dim(), "AffineProjector" );
        if ( _llt.info() != Eigen::Success )
            throw NumericalError( "AffineProjector: A A^* is not positive definite" );
    }

    Vector
    project ( const Vector & x ) const
    {
        const Vector  r = _map.apply( x ) - _b;

        return x - _map.adjoint( _llt.solve( r ) );
    }

private:
    LinearMap                  _map;
    Vector                     _b;
    Eigen::LLT< Matrix >       _llt;
};

}// namespace proxdual
