package edu.sim.aero;

public class Aerodynamics {
    private double rho = 1.225;
    private double v;
    private double q;
    private double area = 16.2;
    private double stallAngle = 0.26;
    private double mu = 1.81e-5;

    public void setVelocity(double velocity) {
        v = velocity;
    }

    public double getDynamicPressure() {
        return q;
    }

    // computes dynamic pressure
    public void dynamicPressure() {
        q = 0.5 * rho * v * v;
    }

    public double liftForce(double cl) {
        return cl * q * area;
    }

    public double dragForce(double cd, double speed) {
        double qs = 0.5 * rho * speed * speed;
        return cd * qs * area;
    }

    public double machNumber(double speed, double a) {
        return speed / a;
    }

    public double reynolds(double speed, double length) {
        return rho * speed * length / mu;
    }

    public double liftCoefficient(double alpha) {
        return 2.0 * Math.PI * alpha;
    }

    /** Lift coefficient that collapses past the stall angle. */
    public double stalledLift(double alpha) {
        return alpha > stallAngle ? 0.0 : liftCoefficient(alpha);
    }

    public boolean isSupersonic(double mach) {
        return mach > 1.0;
    }

    public double liftToDrag(double cl, double cd) {
        if (cd == 0.0) {
            return 0.0;
        }
        return cl / cd;
    }
}
