"""Fair tilings of the plane by pairwise incongruent convex pentagons."""
