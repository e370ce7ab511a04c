package edu.sim.fluid;

public class Fluids {
    private double p0 = 101325.0;
    private double g = 9.81;
    private double waterDensity = 1000.0;
    private double viscosity = 0.001;
    private double pressure;
    private double depth;

    public double bernoulliPressure(double p1, double rho, double v1, double v2) {
        return p1 + 0.5 * rho * (v1 * v1 - v2 * v2);
    }

    public double flowRate(double a, double v) {
        return a * v;
    }

    public double continuityVelocity(double a1, double v1, double a2) {
        return a1 * v1 / a2;
    }

    public void hydrostatic() {
        pressure = p0 + waterDensity * g * depth;
    }

    public double pipeReynolds(double v, double d) {
        return waterDensity * v * d / viscosity;
    }

    public void setDepth(double d) {
        depth = d;
    }

    public String units() {
        String s = "Pa";
        s = s + "/m";
        return s;
    }
}
