package edu.sim.gui;

import java.applet.Applet;
import java.awt.Graphics;

public class AtmospherePanel extends Applet {
    private int width = 400;
    private int height = 300;

    public void init() {
        resize(width, height);
    }

    // centre of the drawing area
    public int centreX() {
        return width / 2;
    }

    public int barHeight(double fraction) {
        return (int) (fraction * height);
    }

    public void paint(Graphics g) {
        g.drawString("Atmosphere", 10, 20);
    }
}
